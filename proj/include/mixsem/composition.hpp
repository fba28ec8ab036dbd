#pragma once

// Sentence meaning: map pregroup types to spaces, turn a reduction into a
// wiring (doubled on ket and bra wires for operator meanings) and evaluate it.
// Closed forms for the Frobenius constructions live alongside the generic
// evaluator; the evaluator is their oracle.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mixsem/cpm.hpp"
#include "mixsem/error.hpp"
#include "mixsem/frobenius.hpp"
#include "mixsem/pregroup.hpp"
#include "mixsem/tensor.hpp"
#include "mixsem/wiring.hpp"

namespace mixsem::composition {

using pregroup::PregroupType;

class SpaceAssignment {
 public:
  SpaceAssignment() = default;
  SpaceAssignment(std::map<std::string, std::size_t> dims, bool unified);

  /// Q(n) = N, Q(s) = S.
  static SpaceAssignment split(std::size_t n, std::size_t s);
  /// Every basic type maps to the same space W.
  static SpaceAssignment unified(std::size_t w);

  std::size_t dim(const std::string& base) const;
  bool is_unified() const { return unified_; }
  const std::map<std::string, std::size_t>& dims() const { return dims_; }
  Shape shape_of(const PregroupType& t) const;

 private:
  std::map<std::string, std::size_t> dims_;
  bool unified_ = false;
};

enum class Tag { Given, AdjectiveCopy, VerbCopySubject, VerbCopyObject, RelPronoun };
enum class Mode { Pure, Density, DensityFrobenius, Noncommutative };

Tag parse_tag(const std::string& s);
Mode parse_mode(const std::string& s);
std::string to_string(Tag t);
std::string to_string(Mode m);

/// A word's meaning as stored in a lexicon. Copy-tagged words carry the
/// unexpanded tensor (a vector for adjectives, a matrix for verbs); density
/// meanings list ket axes then bra axes.
template <Semiring S>
struct WordState {
  std::string surface;
  PregroupType type;
  Tensor<S> meaning;
  bool density = false;
  Tag tag = Tag::Given;
};

/// Rank-k spider: one where all k indices agree.
template <Semiring S>
Tensor<S> spider(std::size_t d, std::size_t k) {
  Tensor<S> t(Shape(k, d));
  std::size_t stride = 0;
  for (std::size_t i = 0; i < k; ++i) stride = stride * d + 1;
  for (std::size_t i = 0; i < d; ++i) t[i * stride] = S::one();
  return t;
}

enum class CopySide { Subject, Object };

/// Copy a verb matrix V[s,o] into a rank-3 tensor T[s,w,o] of type n^r.s.n^l.
/// Copy-object: T = V[s,o] delta(w=o); copy-subject: T = V[s,o] delta(w=s).
template <Semiring S>
Tensor<S> expand_copy(const Tensor<S>& v, CopySide side) {
  if (v.rank() != 2 || v.dim(0) != v.dim(1)) throw ShapeError("expand_copy: verb must be a square matrix");
  const std::size_t d = v.dim(0);
  const std::vector<Tensor<S>> f{v, spider<S>(d, 3)};
  if (side == CopySide::Object) return apply_wiring<S>({{{1, 4}}, {0, 2, 3}}, f);
  return apply_wiring<S>({{{0, 4}}, {2, 3, 1}}, f);
}

/// Doubled copy of a verb operator rho[s,o,s',o'] into rank 6.
template <Semiring S>
Tensor<S> expand_copy_density(const Tensor<S>& rho, CopySide side) {
  if (rho.rank() != 4) throw ShapeError("expand_copy_density: expected a rank-4 verb operator");
  const std::size_t d = rho.dim(0);
  if (rho.shape() != Shape(4, d)) throw ShapeError("expand_copy_density: verb operator must be square");
  const Tensor<S> sp = spider<S>(d, 3);
  const std::vector<Tensor<S>> f{rho, sp, sp};
  if (side == CopySide::Object) return apply_wiring<S>({{{1, 6}, {3, 9}}, {0, 4, 5, 2, 7, 8}}, f);
  return apply_wiring<S>({{{0, 6}, {2, 9}}, {4, 5, 1, 7, 8, 3}}, f);
}

/// Doubled adjective copy: [i,j,i',j'] = rho[i,i'] delta(i=j) delta(i'=j').
template <Semiring S>
Tensor<S> expand_adjective_density(const Tensor<S>& rho) {
  if (rho.rank() != 2 || rho.dim(0) != rho.dim(1)) throw ShapeError("adjective operator must be square");
  const Tensor<S> sp = spider<S>(rho.dim(0), 3);
  return apply_wiring<S>({{{0, 4}, {1, 7}}, {2, 3, 5, 6}}, std::vector<Tensor<S>>{rho, sp, sp});
}

/// Relative pronoun from its type: one spider joining every n wire, and the
/// remaining wires deleted (all-ones).
template <Semiring S>
Tensor<S> relative_pronoun(const PregroupType& type, const SpaceAssignment& spaces) {
  const Shape shape = spaces.shape_of(type);
  Tensor<S> t(shape);
  std::vector<std::size_t> idx(shape.size(), 0);
  do {
    bool ok = true;
    std::size_t shared = 0;
    bool have = false;
    for (std::size_t k = 0; k < shape.size() && ok; ++k) {
      if (type.atoms[k].base != "n") continue;
      if (!have) {
        shared = idx[k];
        have = true;
      } else if (idx[k] != shared) {
        ok = false;
      }
    }
    if (ok) t.at(std::span<const std::size_t>(idx)) = S::one();
  } while (!shape.empty() && mixsem::detail::next_index(idx, shape));
  return t;
}

/// Expands a tagged word to a tensor of the full type shape (doubled for density
/// meanings). Throws ShapeError when the stored meaning does not fit.
template <Semiring S>
Tensor<S> prepare(const WordState<S>& w, const SpaceAssignment& spaces) {
  const Shape full = spaces.shape_of(w.type);
  Shape doubled = full;
  doubled.insert(doubled.end(), full.begin(), full.end());
  const auto fail = [&](const std::string& what) {
    return ShapeError("word '" + w.surface + "': " + what + ", meaning has shape " + shape_string(w.meaning.shape()));
  };
  switch (w.tag) {
    case Tag::Given: {
      if (!w.density) {
        if (w.meaning.shape() != full) throw fail("expected shape " + shape_string(full));
        return w.meaning;
      }
      if (w.meaning.shape() == doubled) return w.meaning;
      const std::size_t v = shape_volume(full);
      if (w.meaning.shape() == Shape{v, v}) return w.meaning.reshaped(doubled);
      throw fail("expected an operator of shape " + shape_string(doubled));
    }
    case Tag::AdjectiveCopy: {
      if (full.size() != 2 || full[0] != full[1]) throw fail("adjective copy needs a type like n.n^l");
      const std::size_t d = full[0];
      if (!w.density) {
        if (w.meaning.shape() != Shape{d}) throw fail("expected a vector of length " + std::to_string(d));
        return frobenius::delta(w.meaning);
      }
      if (w.meaning.shape() != Shape{d, d}) throw fail("expected a " + std::to_string(d) + "x" + std::to_string(d) + " operator");
      return expand_adjective_density(w.meaning);
    }
    case Tag::VerbCopySubject:
    case Tag::VerbCopyObject: {
      const CopySide side = w.tag == Tag::VerbCopySubject ? CopySide::Subject : CopySide::Object;
      if (full.size() != 3 || full[0] != full[1] || full[1] != full[2]) {
        throw fail("copy verbs need a type like n^r.s.n^l on a unified space");
      }
      const std::size_t d = full[0];
      if (!w.density) {
        if (w.meaning.shape() != Shape{d, d}) throw fail("expected a verb matrix");
        return expand_copy(w.meaning, side);
      }
      Tensor<S> rho = w.meaning;
      if (rho.shape() == Shape{d * d, d * d}) rho = rho.reshaped(Shape{d, d, d, d});
      if (rho.shape() != Shape{d, d, d, d}) throw fail("expected a verb operator on W (x) W");
      return expand_copy_density(rho, side);
    }
    case Tag::RelPronoun: {
      const Tensor<S> t = relative_pronoun<S>(w.type, spaces);
      if (!w.density) return t;
      if constexpr (std::is_same_v<S, RealField>) {
        return cpm::lift_tensor(t);
      } else {
        return tensor_product(t, t);
      }
    }
  }
  throw fail("unknown construction tag");
}

struct Options {
  /// Residual argument wires (non-zero adjoint order) left over by an
  /// intransitive use are closed with the all-ones deleting effect.
  bool delete_unfilled = true;
};

/// Contraction plan over the flattened atoms plus the wires closed by deletion.
struct Plan {
  pregroup::FlatSentence flat;
  pregroup::Reduction reduction;
  std::vector<std::size_t> deleted;  // flat positions closed with iota
  std::vector<std::size_t> output;   // flat positions of the open result wires
};

Plan make_plan(const std::vector<PregroupType>& types, const PregroupType& target, const Options& opts = {});

/// Human-readable plan: one contraction per line.
std::string plan_trace(const Plan& plan, const std::vector<std::string>& surfaces);

namespace detail {

template <Semiring S>
std::vector<PregroupType> types_of(const std::vector<WordState<S>>& words) {
  std::vector<PregroupType> types;
  for (const auto& w : words) types.push_back(w.type);
  return types;
}

inline std::size_t volume_of(const Plan& plan, const std::vector<std::size_t>& positions,
                             const SpaceAssignment& spaces) {
  std::size_t v = 1;
  for (std::size_t p : positions) v *= spaces.dim(plan.flat.atoms[p].base);
  return v;
}

}  // namespace detail

/// Evaluates a pure sentence: every contraction pair of the plan becomes a cap.
template <Semiring S>
Tensor<S> compose_pure(const std::vector<WordState<S>>& words, const Plan& plan, const SpaceAssignment& spaces) {
  std::vector<Tensor<S>> factors;
  for (const auto& w : words) {
    if (w.density) throw ShapeError("compose_pure: word '" + w.surface + "' has an operator meaning");
    factors.push_back(prepare(w, spaces));
  }
  IndexWiring ws;
  for (const auto& c : plan.reduction.contractions) ws.pairs.emplace_back(c.left, c.right);
  std::size_t next = plan.flat.atoms.size();
  for (std::size_t p : plan.deleted) {
    factors.push_back(ones<S>(Shape{spaces.dim(plan.flat.atoms[p].base)}));
    ws.pairs.emplace_back(p, next++);
  }
  ws.output = plan.output;
  return apply_wiring(ws, factors);
}

template <Semiring S>
Tensor<S> compose_pure(const std::vector<WordState<S>>& words, const PregroupType& target,
                       const SpaceAssignment& spaces, const Options& opts = {}) {
  return compose_pure(words, make_plan(detail::types_of(words), target, opts), spaces);
}

/// Evaluates the doubled plan: each pair is applied to the ket wires and again to
/// the bra wires. Pure words are lifted first. Returns the operator on the
/// residual space as a square matrix (kets as rows).
template <Semiring S>
Tensor<S> compose_density_matrix(const std::vector<WordState<S>>& words, const Plan& plan,
                                 const SpaceAssignment& spaces) {
  std::vector<Tensor<S>> factors;
  std::vector<std::size_t> ket_of(plan.flat.atoms.size()), bra_of(plan.flat.atoms.size());
  std::size_t base = 0;
  std::size_t pos = 0;
  for (const auto& w : words) {
    Tensor<S> t = prepare(w, spaces);
    if (!w.density) {
      Tensor<S> bra = t;
      for (auto& x : bra.data()) x = S::conj(x);
      t = tensor_product(t, bra);
    }
    const std::size_t k = w.type.size();
    for (std::size_t l = 0; l < k; ++l, ++pos) {
      ket_of[pos] = base + l;
      bra_of[pos] = base + k + l;
    }
    base += 2 * k;
    factors.push_back(std::move(t));
  }
  IndexWiring ws;
  for (const auto& c : plan.reduction.contractions) {
    ws.pairs.emplace_back(ket_of[c.left], ket_of[c.right]);
    ws.pairs.emplace_back(bra_of[c.left], bra_of[c.right]);
  }
  for (std::size_t p : plan.deleted) {
    const Tensor<S> effect = ones<S>(Shape{spaces.dim(plan.flat.atoms[p].base)});
    factors.push_back(effect);
    ws.pairs.emplace_back(ket_of[p], base++);
    factors.push_back(effect);
    ws.pairs.emplace_back(bra_of[p], base++);
  }
  for (std::size_t p : plan.output) ws.output.push_back(ket_of[p]);
  for (std::size_t p : plan.output) ws.output.push_back(bra_of[p]);
  const std::size_t v = detail::volume_of(plan, plan.output, spaces);
  return apply_wiring(ws, factors).reshaped(Shape{v, v});
}

template <Semiring S>
Tensor<S> compose_density_matrix(const std::vector<WordState<S>>& words, const PregroupType& target,
                                 const SpaceAssignment& spaces, const Options& opts = {}) {
  return compose_density_matrix(words, make_plan(detail::types_of(words), target, opts), spaces);
}

/// Real doubled evaluation with the positivity of the result checked.
cpm::PositiveOperator compose_density(const std::vector<WordState<RealField>>& words, const PregroupType& target,
                                      const SpaceAssignment& spaces, const Options& opts = {});

/// sum_i subj_i (x) obj_i.
RealTensor build_verb_tensor(const std::vector<std::pair<RealTensor, RealTensor>>& pairs);

// Closed forms. In the doubled versions verb operators are d^2 x d^2 (or rank 4)
// with composite index (subject, object).

/// mu(a, n).
RealTensor adjective_closed(const RealTensor& adjective, const RealTensor& noun);
cpm::PositiveOperator adjective_closed(const cpm::PositiveOperator& adjective, const cpm::PositiveOperator& noun);

/// Copy-object: mu(V^T s, o). Copy-subject: mu(V o, s).
RealTensor copy_closed(const RealTensor& verb, const RealTensor& subj, const RealTensor& obj, CopySide side);
cpm::PositiveOperator copy_closed(const RealTensor& verb_op, const cpm::PositiveOperator& subj,
                                  const cpm::PositiveOperator& obj, CopySide side);

/// Which role the relative pronoun fills: "noun that verb arg" (subject) or
/// "noun that arg verb" (object).
enum class RelativeSide { Subject, Object };

/// Subject: mu(noun, V arg). Object: mu(noun, V^T arg).
RealTensor relative_clause(const RealTensor& noun, const RealTensor& verb, const RealTensor& arg, RelativeSide side);
cpm::PositiveOperator relative_clause(const cpm::PositiveOperator& noun, const RealTensor& verb_op,
                                      const cpm::PositiveOperator& arg, RelativeSide side);

/// Doubled verb application: contracts one slot of the verb operator with rho
/// on both the ket and the bra side. Slot 0 is the subject, slot 1 the object.
RealTensor doubled_apply(const RealTensor& verb_op, const RealTensor& rho, std::size_t slot);

/// Operator composition in the order given by `plan` (indices into `ops`).
RealTensor compose_noncomm(const std::vector<RealTensor>& ops, const std::vector<std::size_t>& plan);

}  // namespace mixsem::composition
