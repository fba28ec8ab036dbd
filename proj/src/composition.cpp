#include "mixsem/composition.hpp"

#include <sstream>

#include "mixsem/linalg.hpp"

namespace mixsem::composition {

SpaceAssignment::SpaceAssignment(std::map<std::string, std::size_t> dims, bool unified)
    : dims_(std::move(dims)), unified_(unified) {
  if (dims_.empty()) throw ShapeError("space assignment has no basic types");
  for (const auto& [base, d] : dims_) {
    if (d == 0) throw ShapeError("space for '" + base + "' must have positive dimension");
    if (unified_ && d != dims_.begin()->second) throw ShapeError("unified space assignment needs equal dimensions");
  }
}

SpaceAssignment SpaceAssignment::split(std::size_t n, std::size_t s) { return SpaceAssignment({{"n", n}, {"s", s}}, false); }

SpaceAssignment SpaceAssignment::unified(std::size_t w) { return SpaceAssignment({{"n", w}, {"s", w}}, true); }

std::size_t SpaceAssignment::dim(const std::string& base) const {
  const auto it = dims_.find(base);
  if (it == dims_.end()) throw ShapeError("no space assigned to basic type '" + base + "'");
  return it->second;
}

Shape SpaceAssignment::shape_of(const PregroupType& t) const {
  Shape s;
  for (const auto& a : t.atoms) s.push_back(dim(a.base));
  return s;
}

Tag parse_tag(const std::string& s) {
  if (s == "given") return Tag::Given;
  if (s == "adjective-copy") return Tag::AdjectiveCopy;
  if (s == "verb-copy-subject") return Tag::VerbCopySubject;
  if (s == "verb-copy-object") return Tag::VerbCopyObject;
  if (s == "relpron") return Tag::RelPronoun;
  throw ParseError("unknown construction tag '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "pure") return Mode::Pure;
  if (s == "density") return Mode::Density;
  if (s == "density-frobenius") return Mode::DensityFrobenius;
  if (s == "noncommutative") return Mode::Noncommutative;
  throw ParseError("unknown composition mode '" + s + "'");
}

std::string to_string(Tag t) {
  switch (t) {
    case Tag::Given: return "given";
    case Tag::AdjectiveCopy: return "adjective-copy";
    case Tag::VerbCopySubject: return "verb-copy-subject";
    case Tag::VerbCopyObject: return "verb-copy-object";
    case Tag::RelPronoun: return "relpron";
  }
  return "?";
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Pure: return "pure";
    case Mode::Density: return "density";
    case Mode::DensityFrobenius: return "density-frobenius";
    case Mode::Noncommutative: return "noncommutative";
  }
  return "?";
}

Plan make_plan(const std::vector<PregroupType>& types, const PregroupType& target, const Options& opts) {
  Plan plan;
  plan.flat = pregroup::flatten(types);
  plan.reduction = pregroup::reduce_greedy(types);
  const auto& r = plan.reduction;
  if (r.residual == target) {
    plan.output = r.residual_positions;
    return plan;
  }
  if (opts.delete_unfilled) {
    PregroupType kept;
    std::vector<std::size_t> kept_pos, dropped;
    for (std::size_t k = 0; k < r.residual_positions.size(); ++k) {
      if (r.residual.atoms[k].adjoint == 0) {
        kept.atoms.push_back(r.residual.atoms[k]);
        kept_pos.push_back(r.residual_positions[k]);
      } else {
        dropped.push_back(r.residual_positions[k]);
      }
    }
    if (kept == target) {
      plan.output = std::move(kept_pos);
      plan.deleted = std::move(dropped);
      return plan;
    }
  }
  throw NoReduction("sentence reduces to " + pregroup::to_string(r.residual) + ", not " + pregroup::to_string(target));
}

std::string plan_trace(const Plan& plan, const std::vector<std::string>& surfaces) {
  std::ostringstream os;
  const auto atom = [&](std::size_t p) {
    const std::size_t w = plan.flat.word_of[p];
    return std::to_string(p) + ":" + pregroup::to_string(plan.flat.atoms[p]) + "[" +
           (w < surfaces.size() ? surfaces[w] : std::to_string(w)) + "]";
  };
  for (const auto& c : plan.reduction.contractions) {
    os << (c.kind == pregroup::CapKind::EpsLeft ? "eps^l " : "eps^r ") << atom(c.left) << " -- " << atom(c.right) << '\n';
  }
  for (std::size_t p : plan.deleted) os << "iota  " << atom(p) << '\n';
  for (std::size_t p : plan.output) os << "open  " << atom(p) << '\n';
  return os.str();
}

cpm::PositiveOperator compose_density(const std::vector<WordState<RealField>>& words, const PregroupType& target,
                                      const SpaceAssignment& spaces, const Options& opts) {
  return cpm::PositiveOperator::from_matrix(compose_density_matrix(words, target, spaces, opts));
}

RealTensor build_verb_tensor(const std::vector<std::pair<RealTensor, RealTensor>>& pairs) {
  if (pairs.empty()) throw DataError("build_verb_tensor: no argument pairs");
  const Shape shape{pairs.front().first.size(), pairs.front().second.size()};
  RealTensor v(shape);
  for (const auto& [s, o] : pairs) {
    if (s.rank() != 1 || o.rank() != 1 || s.size() != shape[0] || o.size() != shape[1]) {
      throw ShapeError("build_verb_tensor: argument vectors differ in size");
    }
    v = added(v, linalg::outer(s, o));
  }
  return v;
}

namespace {

RealTensor as_verb_matrix(const RealTensor& verb_op, std::size_t d) {
  if (verb_op.shape() == Shape{d * d, d * d}) return verb_op;
  if (verb_op.shape() == Shape{d, d, d, d}) return verb_op.reshaped(Shape{d * d, d * d});
  throw ShapeError("verb operator of shape " + shape_string(verb_op.shape()) + " does not act on " +
                   std::to_string(d) + "x" + std::to_string(d));
}

}  // namespace

RealTensor doubled_apply(const RealTensor& verb_op, const RealTensor& rho, std::size_t slot) {
  linalg::require_square(rho, "doubled_apply");
  const std::size_t d = rho.dim(0);
  const RealTensor v = as_verb_matrix(verb_op, d);
  const std::size_t n = d * d;
  RealTensor out(Shape{d, d});
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t y = 0; y < d; ++y) {
      double s = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          const std::size_t row = slot == 0 ? a * d + x : x * d + a;
          const std::size_t col = slot == 0 ? b * d + y : y * d + b;
          s += v[row * n + col] * rho[a * d + b];
        }
      }
      out[x * d + y] = s;
    }
  }
  return out;
}

RealTensor adjective_closed(const RealTensor& adjective, const RealTensor& noun) { return frobenius::mu(adjective, noun); }

cpm::PositiveOperator adjective_closed(const cpm::PositiveOperator& adjective, const cpm::PositiveOperator& noun) {
  return frobenius::hadamard_double(adjective, noun);
}

RealTensor copy_closed(const RealTensor& verb, const RealTensor& subj, const RealTensor& obj, CopySide side) {
  if (side == CopySide::Object) return frobenius::mu(linalg::apply(linalg::transpose(verb), subj), obj);
  return frobenius::mu(linalg::apply(verb, obj), subj);
}

cpm::PositiveOperator copy_closed(const RealTensor& verb_op, const cpm::PositiveOperator& subj,
                                  const cpm::PositiveOperator& obj, CopySide side) {
  if (side == CopySide::Object) {
    return cpm::PositiveOperator::from_matrix(frobenius::hadamard(doubled_apply(verb_op, subj.matrix(), 0), obj.matrix()));
  }
  return cpm::PositiveOperator::from_matrix(frobenius::hadamard(doubled_apply(verb_op, obj.matrix(), 1), subj.matrix()));
}

RealTensor relative_clause(const RealTensor& noun, const RealTensor& verb, const RealTensor& arg, RelativeSide side) {
  if (verb.rank() != 2 || verb.dim(0) != verb.dim(1) || verb.dim(0) != noun.size()) {
    throw ShapeError("relative_clause: verb must be square and match the noun space");
  }
  const RealTensor applied =
      side == RelativeSide::Subject ? linalg::apply(verb, arg) : linalg::apply(linalg::transpose(verb), arg);
  return frobenius::mu(noun, applied);
}

cpm::PositiveOperator relative_clause(const cpm::PositiveOperator& noun, const RealTensor& verb_op,
                                      const cpm::PositiveOperator& arg, RelativeSide side) {
  if (noun.dim() != arg.dim()) throw ShapeError("relative_clause: noun and argument spaces differ");
  const RealTensor applied = doubled_apply(verb_op, arg.matrix(), side == RelativeSide::Subject ? 1 : 0);
  return cpm::PositiveOperator::from_matrix(frobenius::hadamard(noun.matrix(), applied));
}

RealTensor compose_noncomm(const std::vector<RealTensor>& ops, const std::vector<std::size_t>& plan) {
  if (plan.empty()) throw ShapeError("compose_noncomm: empty plan");
  for (std::size_t i : plan) {
    if (i >= ops.size()) throw ShapeError("compose_noncomm: plan refers to word " + std::to_string(i));
  }
  RealTensor acc = ops[plan.front()];
  linalg::require_square(acc, "compose_noncomm");
  for (std::size_t k = 1; k < plan.size(); ++k) acc = frobenius::mu_noncomm(acc, ops[plan[k]]);
  return acc;
}

}  // namespace mixsem::composition
