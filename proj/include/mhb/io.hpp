#ifndef MHB_IO_HPP
#define MHB_IO_HPP

#include <string>

#include "mhb/machine.hpp"
#include "mhb/tpda.hpp"

namespace mhb {

enum class ModelKind { Mhpda, Cm, Cfsm };

/// One parsed model file; `kind` selects which member is meaningful.
struct ParsedModel {
  ModelKind kind = ModelKind::Mhpda;
  Tpda tpda;
  Machine machine;
};

/// Parses a model in the line-oriented text formats. The first non-comment
/// token selects the format (`mhpda`, `cm`, `cfsm`); `#` starts a comment.
/// Diagnostics carry 1-based line numbers.
ParsedModel parse_model(const std::string& text);

std::string serialize_tpda(const Tpda& p);

/// Serializes in the `cfsm` form when the machine has no counters and only
/// the trivial stack, in the `cm` form otherwise (which also carries
/// channel/message headers for mixed machines).
std::string serialize_machine(const Machine& m);

/// Index of a named state.
uint32_t state_index(const std::vector<std::string>& names, const std::string& name);

}  // namespace mhb

#endif
