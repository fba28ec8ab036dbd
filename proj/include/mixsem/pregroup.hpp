#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mixsem::pregroup {

/// A basic type with an adjoint order: 0 plain, -1 left adjoint, +1 right
/// adjoint, and further iterates beyond that.
struct AtomicType {
  std::string base;
  int adjoint = 0;

  friend bool operator==(const AtomicType&, const AtomicType&) = default;
};

/// Ordered product of atoms; the empty product is the unit.
struct PregroupType {
  std::vector<AtomicType> atoms;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
  friend bool operator==(const PregroupType&, const PregroupType&) = default;
};

/// The declared basic types. Defaults to {n, s}.
class Grammar {
 public:
  Grammar() : basic_{"n", "s"} {}
  explicit Grammar(std::set<std::string> basic) : basic_(std::move(basic)) {}

  bool is_basic(std::string_view b) const { return basic_.count(std::string(b)) > 0; }
  const std::set<std::string>& basic_types() const { return basic_; }

 private:
  std::set<std::string> basic_;
};

/// Parses `atom('^l'|'^r')*('.' atom('^l'|'^r')*)*`; `l` decrements the adjoint
/// order, `r` increments it. "1" or an empty string denotes the unit.
PregroupType parse_type(std::string_view text, const Grammar& grammar = Grammar{});

std::string to_string(const AtomicType& a);
std::string to_string(const PregroupType& t);

enum class Side { Left, Right };

PregroupType adjoint(const PregroupType& t, Side side);

PregroupType concat(const PregroupType& a, const PregroupType& b);

/// eps^l for p^l . p (left atom has negative order), eps^r for p . p^r.
enum class CapKind { EpsLeft, EpsRight };

struct Contraction {
  std::size_t left = 0;
  std::size_t right = 0;
  CapKind kind = CapKind::EpsRight;

  friend bool operator==(const Contraction&, const Contraction&) = default;
};

/// Contraction plan over the flattened atom sequence of a sentence.
struct Reduction {
  std::vector<Contraction> contractions;  // in the order they were found
  PregroupType residual;
  std::vector<std::size_t> residual_positions;  // flat positions of the residual atoms

  friend bool operator==(const Reduction&, const Reduction&) = default;
};

/// Flattened atoms plus, for each atom, the index of the word it came from.
struct FlatSentence {
  std::vector<AtomicType> atoms;
  std::vector<std::size_t> word_of;
};

FlatSentence flatten(const std::vector<PregroupType>& types);

/// Runs the stack contraction pass and returns whatever residual is left,
/// without comparing it to a target.
Reduction reduce_greedy(const std::vector<PregroupType>& types);

/// Stack-based contraction-only reduction. Throws NoReduction when the
/// residual differs from `target`.
Reduction reduce(const std::vector<PregroupType>& types, const PregroupType& target);

/// Checks the structural invariants of a plan: disjoint, type-matched,
/// non-crossing pairs and a residual made of the uncontracted atoms.
/// Returns an empty string when all hold, otherwise a description.
std::string check_reduction(const FlatSentence& sentence, const Reduction& r);

}  // namespace mixsem::pregroup
