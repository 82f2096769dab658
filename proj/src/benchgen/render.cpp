// SPDX-License-Identifier: Apache-2.0
#include "policybench/benchgen/policy.hpp"

#include <sstream>

namespace policybench::benchgen {

namespace {

std::string layer_list(const std::vector<int>& layers) {
    std::string out;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        out += (i == 0 ? "layer " : ", layer ") + std::to_string(layers[i]);
    }
    return out;
}

std::string task_list(const PolicyDocument& policy) {
    std::string out;
    for (std::size_t i = 0; i < policy.tasks.size(); ++i) {
        out += (i == 0 ? "" : ", ") + policy.tasks[i].name();
    }
    return out;
}

void write_domain_basic(std::ostringstream& md, int layers) {
    md << "## Domain Basic\n\n";
    md << "### Profile Structure\n\n";
    md << "The jth profile instance at profile layer i has its primary key as profile-i-j\n";
    md << "There are " << layers << " layers of profiles, and each profile layer has a number of profile "
          "instances. All the profile instances at the same layer have the same attributes.\n\n";
    for (int l = 1; l <= layers; ++l) {
        md << "- Each profile at layer " << l << " indexed j Profile-" << l << "-j has attributes: ";
        for (int a = 1; a <= 8; ++a) {
            md << (a == 1 ? "" : ", ") << "Profile-" << l << "-Attribute-" << a;
        }
        md << "\n\n";
    }
    md << "### Attribute Definitions\n\n";
    md << "The jth attribute at layer i is denoted as profile-attribute-i-j.\n\n";
    for (int l = 1; l <= layers; ++l) {
        md << "At layer " << l << ":\n";
        md << "  - The attribute-1 and attribute-2 and attribute-7 and attribute-8 can serve as conditions\n";
        for (int attr : kReferenceAttributes) {
            md << "  - The attribute-" << attr << " contain the primary keys to access profiles at layer "
               << reference_target_layer(l, attr, layers) << "\n";
        }
        md << "  - The attribute-3 can be used as an alternative way to access the profiles while searching.\n\n";
    }
    md << "### Profile Access Pattern\n\n";
    md << "When the user specifies a profile-k-id, you should understand that this means the user wants to "
          "access the profile-k instance with the primary key's index being the given value. When the user "
          "specifies a profile-k-info, you should understand that this means the user wants to access the "
          "profile-k instance with the lookup attribute value of the provided string.\n";
    md << reference_rule_line(layers) << "\n\n";
    md << "**Relative Profile Access:**\n\n";
    md << "When the user specifies getting a 'relative profile' or 'related profile', this means accessing "
          "other profile instances at the same layer as the current profile. To accomplish this, you should "
          "use the reference attributes from the current profile instance to find the primary keys of the "
          "target profile instances at the same layer.\n\n";
}

void write_tools(std::ostringstream& md, const PolicyDocument& policy) {
    md << "## Tool Calling Instructions\n\n";
    md << "### General Rules\n\n";
    for (const auto& line : general_rule_lines()) {
        md << "- " << line << "\n";
    }
    md << "\n### Available Tools\n\n";
    const auto blocks = policy.tool_instructions.empty() ? tool_instruction_blocks() : policy.tool_instructions;
    static const char* const headings[] = {"#### Profile Access Tools", nullptr, "#### Task Completion Tools",
                                           "#### Conflict Resolution Tool"};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i < std::size(headings) && headings[i] != nullptr) {
            md << headings[i] << "\n\n";
        }
        md << blocks[i] << "\n\n";
    }
    md << "### Tool Parameter Mapping Guidelines\n\n";
    md << "- profile-id references: When users mention \"my profile-id is profile-k-X\" or \"profile-k-X\", "
          "use the Get-Profile-Layer-k tool with index-value=\"profile-k-X\"\n";
    md << "- reference attribute usage: When you access a profile instance and obtain reference attributes, "
          "use those primary key values with Get-Profile-Layer-k to access the referenced profiles at the "
          "target layers\n";
    md << "- profile-info references: When users mention \"my profile-info is Y\" or provide lookup values, "
          "use the Search-Profile-Layer-k tool with key-value=\"Y\"\n";
    md << "- Task completion: Always pass computed arguments as a list to finish-task-k tools, ensuring the "
          "order matches task specifications\n\n";
    md << "### Usage Guidelines\n\n";
    md << "The user will specify the instance index at the first layer, and the agent shall go through the "
          "profile instances at different indexes and layers to obtain the attributes needed for the task.\n";
    md << "When several attribute combinations are requested, the k-th combination uses the k-th primary key "
          "of every reference attribute followed; for a task that only needs layer 1, it uses the k-th "
          "instance returned by the search. A single combination always uses the first key or the first "
          "search result.\n\n";
}

void write_task(std::ostringstream& md, const TaskSpec& task) {
    const auto n = std::to_string(task.task_index);
    md << "### " << task.name() << "\n\n";
    md << "- " << layer_requirement_line(task) << "\n";
    md << "- The agent should pass the following arguments into the " << task.finish_tool() << " tool call:\n";
    for (const auto& arg : task.args) {
        md << "  - arg-" << arg.arg_index << ": " << arg.prose << "\n";
    }
    if (task.multi_layer()) {
        md << "- Each task-" << n << " completion requires exactly one profile from each of the specified layers.\n";
        md << "- The agent should call the " << task.finish_tool()
           << " tool with arguments from one instance per layer at a time.\n";
        md << "- Multiple function calls may be needed if multiple profile combinations are requested.\n\n";
    } else {
        md << "- The agent should call the " << task.finish_tool()
           << " tool with the arguments above for the selected profile instance.\n\n";
    }
}

} // namespace

std::vector<std::string> general_rule_lines() {
    return {
        "You should only make one tool call at a time, and if you make a tool call, you should not respond "
        "to the user simultaneously.",
        "If you respond to the user, you should not make a tool call at the same time.",
        "You should only call the tool Tool-Conflict when the request is not able to be handled within the "
        "policy and the user specifications.",
    };
}

std::vector<std::string> general_policy_lines() {
    return {
        "The agent must first get access to the profile instance at layer 1 according to the user specified "
        "primary key, alternatively, the agent may also search for the profile instance at layer 1 when the "
        "user did not provide a profile instance at layer 1 and instead provided a lookup field in profile "
        "layer 1.",
        "The agent should always finish the task with the task required attribute combinations at one time. "
        "If users specify multiple attribute combinations for the task (e.g., 'doing task i for all the "
        "instances accessd in layer 1.'), the agent must call the finish task tool multiple times and only "
        "address one attribute combination at a time.",
    };
}

std::string layer_requirement_line(const TaskSpec& task) {
    return "The agent must access one profile instance at each of the " + layer_list(task.required_layers) +
           " according to the user request,";
}

std::string reference_rule_line(int layer_count) {
    std::string line = "When referring to a user's profile-k, you should follow the reference attributes of "
                       "the layer 1 profile:";
    if (layer_count < 2) {
        return line + " this environment has a single layer, so no reference needs to be followed.";
    }
    line += " the layer 2 profile comes from the layer 1 attribute-5";
    if (layer_count >= 3) {
        line += ", the layer 3 profile comes from the layer 1 attribute-6";
    }
    if (layer_count >= 4) {
        line += ", and every deeper layer k comes from attribute-5 of the layer k-1 profile";
    }
    return line + ".";
}

std::vector<std::string> tool_instruction_blocks() {
    return {
        "- Get-Profile-Layer-k: Use this tool to directly access a specific profile instance by its primary "
        "key.\n"
        "  - Parameter: `index-value` (string) - The full primary key of the profile instance (e.g., "
        "\"profile-1-5\", \"profile-2-10\", \"profile-3-1\")\n"
        "  - When to use:\n"
        "    - When users specify a profile-id, such as \"my profile-id is profile-1-5\" or \"using "
        "profile-2-3\"\n"
        "    - When you obtain a reference attribute value from another profile instance that contains the "
        "primary key to access a different layer\n"
        "  - Example call: Get-Profile-Layer-1(index-value=\"profile-1-5\")",
        "- Search-Profile-Layer-k: Use this tool to find profile instances by their lookup attribute value.\n"
        "  - Parameter: `key-value` (string) - The lookup attribute value to search for\n"
        "  - When to use: When users specify a profile-info, such as \"my profile-info is 'engineering'\" or "
        "\"find profiles with lookup value 'sales'\"\n"
        "  - Example call: Search-Profile-Layer-1(key-value=\"engineering\")",
        "- finish-task-k: Use this tool to complete Task-Type-k with the computed arguments.\n"
        "  - Parameter: `attributes` (list) - A list of computed argument values in the order specified by "
        "the task requirements\n"
        "  - When to use: After accessing all required profile instances and computing the task arguments "
        "according to task specifications\n"
        "  - Example call: finish-task-1(attributes=[25, 150, 42])",
        "- Tool-Conflict: Use this tool when the user request cannot be handled within the policy "
        "constraints.\n"
        "  - Parameters: None\n"
        "  - When to use: If the user request violates policy or cannot be fulfilled with available tools and "
        "data\n"
        "  - Example call: Tool-Conflict()",
    };
}

std::string render_policy_markdown(const PolicyDocument& policy) {
    std::ostringstream md;
    md << "# Agent Policy Document " << policy.pid << "\n\n";
    md << "## General Instructions\n\n";
    md << "The global attribute is currently: ";
    for (std::size_t i = 0; i < policy.globals.values.size(); ++i) {
        md << (i == 0 ? "" : ", ") << "Global-Attribute-Value" << i + 1 << " = " << policy.globals.values[i];
    }
    md << ".\n";
    md << "You are a helpful agent that can get access to profiles and attributes at different layers and "
          "indexes.\n";
    md << "You can help users finish " << task_list(policy) << ".\n\n";

    write_domain_basic(md, policy.layer_count);
    write_tools(md, policy);

    md << "## Policy Specifications\n\n";
    for (std::size_t i = 0; i < policy.general_policies.size(); ++i) {
        md << "### General Policy " << i + 1 << "\n\n" << policy.general_policies[i] << "\n\n";
    }
    md << "## Task Specifications\n\n";
    for (const auto& task : policy.tasks) {
        write_task(md, task);
    }
    std::string text = md.str();
    while (text.size() > 1 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') {
        text.pop_back();
    }
    return text;
}

} // namespace policybench::benchgen
