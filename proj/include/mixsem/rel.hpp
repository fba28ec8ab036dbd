#pragma once

// Truth-theoretic backend: Boolean tensors over named bases, the four sentence
// values, and the "queen rules" model.

#include <map>
#include <string>
#include <vector>

#include "mixsem/composition.hpp"

namespace mixsem::rel {

/// Finite set of named basis elements.
class RelSpace {
 public:
  explicit RelSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t index(const std::string& name) const;
  BoolTensor basis(const std::string& name) const;
  /// Sum (OR) of several basis elements.
  BoolTensor sum(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> names_;
};

enum class SentenceValue { TT, FF, SUP, AMB };

std::string to_string(SentenceValue v);
/// Long form used by the CLI, e.g. "AMBIGUOUS (1_S)".
std::string describe(SentenceValue v);
BoolTensor value_operator(SentenceValue v);

/// Throws DataError unless m is one of the four 2x2 sentence values.
SentenceValue classify(const BoolTensor& m);

struct QueenModel {
  RelSpace nouns{{"freddy", "brian", "elisabeth", "chess", "england", "eps"}};
  RelSpace sentences{{"true", "false"}};
  composition::SpaceAssignment spaces;
  BoolTensor band;
  BoolTensor rule;            // [subject, sentence, object]
  BoolTensor queen_density;   // 6 x 6
  std::map<std::string, composition::WordState<BooleanSemiring>> lexicon;
};

QueenModel build_queen_lexicon();

/// Evaluates the sentence through the doubled composition engine over the
/// Boolean semiring; returns the 2x2 operator on S.
BoolTensor eval_rel_operator(const QueenModel& m, const std::vector<std::string>& tokens);

SentenceValue eval_rel_sentence(const QueenModel& m, const std::vector<std::string>& tokens);

/// Direct loops over "subject rules [object]", independent of the wiring engine.
BoolTensor eval_rel_by_hand(const QueenModel& m, const std::vector<std::string>& tokens);

}  // namespace mixsem::rel
