#pragma once

#include <string>
#include <vector>

#include "instforge/keyword_graph.hpp"

// Node, relation and phrase examples of the keyword-graph prompts, verbatim.
namespace instforge::testing {

inline constexpr const char* kNodeExample = R"(Node(id="open website", type="instruction")
Node(id="develop an e-commerce website", type="task")
Node(id="HTML", type="knowledge point")
Node(id="CSS", type="knowledge point")
Node(id="JavaScript", type="knowledge point")
Node(id="implement user registration", type="instruction")
Node(id="shopping cart functionality", type="instruction")
Node(id="mouse operations", type="instruction"))";

struct RelationExample {
  const char* nodes;
  const char* triples;
};

inline const std::vector<RelationExample>& relation_examples() {
  static const std::vector<RelationExample> examples = {
      {R"(Node(id="data visualization analysis", type='instruction')
Node(id='HTML line chart', type='knowledge point')
Node(id='business analysis report', type='task'))",
       R"(data visualization analysis displays HTML line chart
business analysis report requires data visualization analysis
business analysis report contains HTML line chart)"},
      {R"(Node(id="physical acceleration", type='task')
Node(id="navigation bar", type='instruction'))",
       "physical acceleration unrelated navigation bar"},
      {R"(Node(id="user login", type='task')
Node(id="password verification", type='instruction')
Node(id="security", type='knowledge point'))",
       R"(user login requires password verification
password verification contains security)"},
      {R"(Node(id="artificial intelligence", type='task')
Node(id="psychology", type='knowledge point')
Node(id="ethics", type='knowledge point'))",
       R"(artificial intelligence contains psychology
artificial intelligence contains ethics)"},
      {R"(Node(id="quantum computing", type='task')
Node(id="artificial intelligence", type='task')
Node(id="blockchain", type='knowledge point')
Node(id="cryptography", type='knowledge point'))",
       R"(quantum computing contains cryptography
artificial intelligence contains blockchain
quantum computing unrelated artificial intelligence
artificial intelligence unrelated cryptography)"},
  };
  return examples;
}

inline constexpr const char* kReversedTriple = "data visualization analysis requires business analysis report";

inline constexpr const char* kPhraseExample1 = R"(create game contains create interface
create game needs function to detect cookie value
create game needs record time
create game needs ensure clear code structure
create game based on using HTML, CSS, JavaScript
create interface needs function to detect cookie value
create interface needs record time
create interface needs ensure clear code structure
create interface based on using HTML, CSS, JavaScript
create interface unrelated to physical acceleration)";

inline const NodeSet& phrase_example1_nodes() {
  static const NodeSet nodes = {
      {"create game", NodeKind::Task},
      {"create interface", NodeKind::Instruction},
      {"function to detect cookie value", NodeKind::Instruction},
      {"record time", NodeKind::Instruction},
      {"ensure clear code structure", NodeKind::Instruction},
      {"using HTML, CSS, JavaScript", NodeKind::KnowledgePoint},
      {"physical acceleration", NodeKind::KnowledgePoint},
  };
  return nodes;
}

inline const std::vector<std::string>& phrase_example1_group() {
  static const std::vector<std::string> members = {
      "create game",  "using HTML, CSS, JavaScript", "create interface", "function to detect cookie value",
      "record time",  "ensure clear code structure"};
  return members;
}

inline constexpr const char* kPhraseExample2 = R"(programming parameter definition unrelated to print character
programming parameter definition unrelated to default primary key field
handle missing values unrelated to print character
handle missing values unrelated to default primary key field
train test set unrelated to print character
train test set unrelated to default primary key field
investigate outliers unrelated to print character
investigate outliers unrelated to default primary key field
data analysis unrelated to print character
data analysis unrelated to default primary key field
problem solving unrelated to print character
problem solving unrelated to default primary key field
data splitting unrelated to print character
data splitting unrelated to default primary key field)";

inline const NodeSet& phrase_example2_nodes() {
  static const NodeSet nodes = {
      {"programming parameter definition", NodeKind::Task},
      {"handle missing values", NodeKind::Instruction},
      {"train test set", NodeKind::Instruction},
      {"investigate outliers", NodeKind::Instruction},
      {"data analysis", NodeKind::Task},
      {"problem solving", NodeKind::KnowledgePoint},
      {"data splitting", NodeKind::Instruction},
      {"print character", NodeKind::Instruction},
      {"default primary key field", NodeKind::KnowledgePoint},
  };
  return nodes;
}

}  // namespace instforge::testing
