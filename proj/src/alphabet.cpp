#include "mhb/alphabet.hpp"

#include <sstream>

namespace mhb {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoSegments: return "NoSegments";
    case ErrorKind::EmptySegment: return "EmptySegment";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ReservedSymbol: return "ReservedSymbol";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::MalformedId: return "MalformedId";
    case ErrorKind::MalformedModel: return "MalformedModel";
    case ErrorKind::MalformedGrammar: return "MalformedGrammar";
    case ErrorKind::MalformedCnf: return "MalformedCnf";
    case ErrorKind::MalformedExpression: return "MalformedExpression";
    case ErrorKind::UnknownTransition: return "UnknownTransition";
    case ErrorKind::UnknownTargetState: return "UnknownTargetState";
    case ErrorKind::UnassignedVariable: return "UnassignedVariable";
    case ErrorKind::UntrimmedGrammar: return "UntrimmedGrammar";
    case ErrorKind::NotFlat: return "NotFlat";
    case ErrorKind::NotLetterBounded: return "NotLetterBounded";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::VerificationMismatch: return "VerificationMismatch";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

Alphabet::Alphabet(std::vector<std::string> names) {
  for (const auto& n : names) add(n);
}

Sym Alphabet::add(const std::string& name) {
  if (name == "eps" || name == "$" || name.empty())
    fail(ErrorKind::ReservedSymbol, "'" + name + "' cannot be used as a symbol");
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  Sym s = static_cast<Sym>(names_.size());
  names_.push_back(name);
  index_.emplace(name, s);
  return s;
}

std::optional<Sym> Alphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Sym Alphabet::require(const std::string& name) const {
  auto s = find(name);
  if (!s) fail(ErrorKind::UnknownSymbol, "'" + name + "' is not in the alphabet");
  return *s;
}

bool Alphabet::all_single_char() const {
  for (const auto& n : names_)
    if (n.size() != 1) return false;
  return true;
}

std::string Alphabet::format_word(const Word& word) const {
  if (word.empty()) return "eps";
  std::ostringstream out;
  bool single = all_single_char();
  for (size_t i = 0; i < word.size(); ++i) {
    if (i > 0 && !single) out << '.';
    out << name(word[i]);
  }
  return out.str();
}

Word Alphabet::parse_word(const std::string& text) const {
  Word word;
  if (text == "eps") return word;
  if (text.find('.') != std::string::npos) {
    size_t start = 0;
    while (start <= text.size()) {
      size_t dot = text.find('.', start);
      if (dot == std::string::npos) dot = text.size();
      std::string token = text.substr(start, dot - start);
      if (token.empty())
        fail(ErrorKind::UnknownSymbol, "empty symbol in word '" + text + "'");
      word.push_back(require(token));
      start = dot + 1;
    }
    return word;
  }
  if (auto whole = find(text)) return {*whole};
  if (all_single_char()) {
    for (char c : text) word.push_back(require(std::string(1, c)));
    return word;
  }
  fail(ErrorKind::UnknownSymbol, "'" + text + "' is not in the alphabet");
}

std::vector<uint64_t> parikh(const Word& word, const Alphabet& alphabet) {
  std::vector<uint64_t> counts(alphabet.size(), 0);
  for (Sym s : word) {
    if (s >= alphabet.size())
      fail(ErrorKind::UnknownSymbol, "symbol index out of range");
    counts[s]++;
  }
  return counts;
}

}  // namespace mhb
