#pragma once

#include <optional>
#include <string>

#include "fringelab/rational.hpp"

namespace fringe {

enum class Model { trie, patricia, bst, ebst, cbst, beta_split, uniform_full };

/// Parses model names used on the CLI; "beta" and "cb" both select
/// beta_split (cb implies beta = -1). Throws on unknown names.
Model parse_model(const std::string& name);
std::string model_name(Model m);

struct ModelSpec {
  Model model = Model::uniform_full;
  // leaf count for trie/patricia/beta_split/uniform_full, node count for
  // bst; ebst/cbst derive from a BST with n nodes
  long n = 1;
  double p = 0.5;
  std::optional<BigRational> p_exact;  // set when p was given as a fraction
  double beta = -1.0;

  void validate() const;
};

}  // namespace fringe
