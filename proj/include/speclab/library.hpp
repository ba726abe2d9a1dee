#pragma once

#include <string>
#include <vector>

#include "speclab/instance.hpp"

namespace speclab {

/// Labels of the built-in instances, sorted.
std::vector<std::string> builtin_labels();
/// Instance document for a built-in label; throws DomainError for unknown labels.
std::string builtin_document(const std::string& label);
/// Parse a label of the built-in library or, failing that, a path to an instance file.
InstanceSpec load_instance(const std::string& label_or_path);

}  // namespace speclab
