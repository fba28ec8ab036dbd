#pragma once

// Lexicon files and whole-sentence evaluation in each composition mode.
//
//   # comment
//   dim n 4
//   dim s 4
//   unified
//   target s
//   word <surface> <type> <tag> <pure|density> <TNSR1/DMAT1 path | ->
//
// Paths are relative to the lexicon file. Relative pronouns take "-".

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixsem/composition.hpp"

namespace mixsem::composition {

struct Lexicon {
  SpaceAssignment spaces;
  pregroup::Grammar grammar;
  PregroupType target;
  std::map<std::string, WordState<RealField>> entries;

  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(std::istream& in, const std::filesystem::path& base_dir);

  /// Throws DataError for a word missing from the lexicon.
  const WordState<RealField>& lookup(const std::string& surface) const;
  std::vector<WordState<RealField>> resolve(const std::vector<std::string>& tokens) const;
};

std::vector<std::string> tokenize(const std::string& sentence);

struct SentenceMeaning {
  RealTensor matrix;  // operator on the sentence space (|v><v| in pure mode)
  std::string trace;  // contraction plan, one line per step
  bool closed_form = false;
};

/// Evaluates `tokens` in the given mode against `target` (the lexicon's target
/// when absent). The non-commutative mode multiplies the word operators in the
/// order of `noncomm_plan`, which must be supplied.
SentenceMeaning evaluate(const Lexicon& lex, const std::vector<std::string>& tokens, Mode mode,
                         const std::optional<PregroupType>& target = std::nullopt,
                         const std::vector<std::size_t>& noncomm_plan = {});

}  // namespace mixsem::composition
