#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varjet/holonomy.hpp"
#include "varjet/jet.hpp"
#include "varjet/variational.hpp"

namespace varjet::cli {

struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed model file: [signature] block plus any of [lagrangian],
/// [symmetry <name>], [source], [path], [connection].
struct ModelFile {
  BundleSignature signature{{}, {}};
  std::optional<Expr> density;
  std::vector<std::pair<std::string, EvolutionaryField>> symmetries;
  std::optional<SourceForm> source;
  std::optional<Path> path;
  std::optional<ConnectionForm> connection;

  const Expr& require_density() const {
    if (!density) throw model_error("model has no [lagrangian] block");
    return *density;
  }
};

/// Loads and validates a model file; throws model_error with a line-numbered
/// message on any defect.
ModelFile load_model(const std::string& file_path);

}  // namespace varjet::cli
