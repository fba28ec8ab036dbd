#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixsem/formats.hpp"
#include "mixsem/lexicon.hpp"
#include "mixsem/linalg.hpp"
#include "oracles.hpp"

using namespace mixsem;
using namespace mixsem::composition;

namespace {

using W = WordState<RealField>;

PregroupType T(const char* s) { return pregroup::parse_type(s); }

W pure(const char* surface, const char* type, RealTensor m, Tag tag = Tag::Given) {
  return {surface, T(type), std::move(m), false, tag};
}

W dens(const char* surface, const char* type, RealTensor m, Tag tag = Tag::Given) {
  return {surface, T(type), std::move(m), true, tag};
}

RealTensor V(std::vector<double> v) { return RealTensor::vector(std::move(v)); }

RealTensor random_density(oracle::Random& rng, std::size_t d) { return oracle::from_mat(rng.density(d, rng.index(1, d))); }

// Operator on W (x) W with rows (s, o): a mixture of random product and
// entangled pure states.
RealTensor random_verb_op(oracle::Random& rng, std::size_t d) { return random_density(rng, d * d); }

std::filesystem::path temp_dir(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("space assignments") {
  const auto split = SpaceAssignment::split(3, 2);
  CHECK(split.shape_of(T("n^r.s.n^l")) == Shape{3, 2, 3});
  CHECK_FALSE(split.is_unified());
  CHECK(SpaceAssignment::unified(4).is_unified());
  CHECK_THROWS_AS(SpaceAssignment({{"n", 2}, {"s", 3}}, true), ShapeError);
  CHECK_THROWS_AS(SpaceAssignment({{"n", 0}}, false), ShapeError);
  CHECK_THROWS_AS(split.dim("p"), ShapeError);
}

TEST_CASE("tags and modes round-trip through text") {
  for (auto t : {Tag::Given, Tag::AdjectiveCopy, Tag::VerbCopySubject, Tag::VerbCopyObject, Tag::RelPronoun})
    CHECK(parse_tag(to_string(t)) == t);
  for (auto m : {Mode::Pure, Mode::Density, Mode::DensityFrobenius, Mode::Noncommutative}) CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS_AS(parse_tag("verb"), ParseError);
  CHECK_THROWS_AS(parse_mode("quantum"), ParseError);
}

TEST_CASE("compose_pure") {
  const auto sp = SpaceAssignment::split(2, 2);
  const auto n = V({0.3, -1.2});
  CHECK(compose_pure<RealField>({pure("x", "n", n)}, T("n"), sp) == n);

  // hand-picked subject-verb-object, d = 2
  const oracle::Vec subj{1, 2}, obj{3, -1};
  std::vector<double> verb(8);
  for (std::size_t k = 0; k < 8; ++k) verb[k] = double(k) - 3.5;
  const auto got = compose_pure<RealField>(
      {pure("a", "n", oracle::from_vec(subj)), pure("v", "n^r.s.n^l", RealTensor(Shape{2, 2, 2}, verb)),
       pure("b", "n", oracle::from_vec(obj))},
      T("s"), sp);
  CHECK(oracle::max_diff(oracle::to_vec(got), oracle::svo(subj, verb, 2, obj)) < 1e-14);

  // adjective with a copied vector: mu(a, noun)
  const auto uni = SpaceAssignment::unified(3);
  const auto a = V({2, 0, -1}), noun = V({1, 5, 4});
  CHECK(compose_pure<RealField>({pure("adj", "n.n^l", a, Tag::AdjectiveCopy), pure("x", "n", noun)}, T("n"), uni) ==
        V({2, 0, -4}));

  CHECK_THROWS_AS(compose_pure<RealField>({pure("x", "n", n), pure("y", "n", n)}, T("s"), sp), NoReduction);
  CHECK_THROWS_AS(compose_pure<RealField>({pure("x", "n", V({1, 2, 3}))}, T("n"), sp), ShapeError);
}

TEST_CASE("intransitive use deletes the unused wire") {
  const auto sp = SpaceAssignment::split(2, 3);
  oracle::Random rng(3);
  const auto subj = rng.tensor(Shape{2});
  const auto verb = rng.tensor(Shape{2, 3, 2});
  const auto got = compose_pure<RealField>({pure("a", "n", subj), pure("v", "n^r.s.n^l", verb)}, T("s"), sp);
  const auto want = compose_pure<RealField>({pure("a", "n", subj), pure("v", "n^r.s.n^l", verb), pure("1", "n", V({1, 1}))},
                                            T("s"), sp);
  CHECK(max_abs_diff(got, want) < 1e-14);
  Options strict;
  strict.delete_unfilled = false;
  CHECK_THROWS_AS(make_plan({T("n"), T("n^r.s.n^l")}, T("s"), strict), NoReduction);
  const auto plan = make_plan({T("n"), T("n^r.s.n^l")}, T("s"));
  CHECK(plan.deleted == std::vector<std::size_t>{3});
  const auto trace = plan_trace(plan, {"queen", "rules"});
  CHECK(trace.find("iota") != std::string::npos);
  CHECK(trace.find("0:n[queen]") != std::string::npos);
}

TEST_CASE("verb tensors and copying") {
  CHECK(build_verb_tensor({{V({1, 0}), V({0, 1})}}) == RealTensor::matrix({{0, 1}, {0, 0}}));
  CHECK_THROWS_AS(build_verb_tensor({}), DataError);
  oracle::Random rng(4);
  std::vector<std::pair<RealTensor, RealTensor>> pairs;
  oracle::Mat sum(3, oracle::Vec(3, 0.0));
  for (int k = 0; k < 3; ++k) {
    const auto s = rng.vec(3), o = rng.vec(3);
    pairs.emplace_back(oracle::from_vec(s), oracle::from_vec(o));
    const auto m = oracle::outer(s, o);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sum[i][j] += m[i][j];
  }
  CHECK(oracle::max_diff(oracle::to_mat(build_verb_tensor(pairs)), sum) < 1e-14);

  const auto o = rng.tensor(Shape{3});
  CHECK(copy_closed(linalg::identity(3), ones<RealField>(Shape{3}), o, CopySide::Object) == o);
  const auto t = expand_copy(rng.tensor(Shape{3, 3}), CopySide::Object);
  CHECK(t.shape() == Shape{3, 3, 3});
  CHECK_THROWS_AS(expand_copy(rng.tensor(Shape{2, 3}), CopySide::Object), ShapeError);
}

TEST_CASE("copy closed forms agree with the full diagram") {
  oracle::Random rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = rng.index(1, 4);
    const auto sp = SpaceAssignment::unified(d);
    const auto v = rng.tensor(Shape{d, d});
    const auto s = rng.tensor(Shape{d}), o = rng.tensor(Shape{d});
    for (auto side : {CopySide::Object, CopySide::Subject}) {
      const Tag tag = side == CopySide::Object ? Tag::VerbCopyObject : Tag::VerbCopySubject;
      const auto diagram =
          compose_pure<RealField>({pure("s", "n", s), pure("v", "n^r.s.n^l", v, tag), pure("o", "n", o)}, T("s"), sp);
      CHECK(max_abs_diff(diagram, copy_closed(v, s, o, side)) < 1e-12);
    }
    // closed forms against loops
    const auto vm = oracle::to_mat(v);
    const auto obj_side = oracle::pointwise(oracle::matvec(oracle::transpose(vm), oracle::to_vec(s)), oracle::to_vec(o));
    CHECK(oracle::max_diff(oracle::to_vec(copy_closed(v, s, o, CopySide::Object)), obj_side) < 1e-13);
    const auto subj_side = oracle::pointwise(oracle::matvec(vm, oracle::to_vec(o)), oracle::to_vec(s));
    CHECK(oracle::max_diff(oracle::to_vec(copy_closed(v, s, o, CopySide::Subject)), subj_side) < 1e-13);

    // doubled
    const auto rs = random_density(rng, d), ro = random_density(rng, d);
    const auto vop = random_verb_op(rng, d);
    for (auto side : {CopySide::Object, CopySide::Subject}) {
      const Tag tag = side == CopySide::Object ? Tag::VerbCopyObject : Tag::VerbCopySubject;
      const auto diagram = compose_density_matrix<RealField>(
          {dens("s", "n", rs), dens("v", "n^r.s.n^l", vop, tag), dens("o", "n", ro)}, T("s"), sp);
      const auto closed = copy_closed(vop, cpm::PositiveOperator::from_matrix(rs), cpm::PositiveOperator::from_matrix(ro), side);
      CHECK(max_abs_diff(diagram, closed.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("doubled_apply against loops") {
  oracle::Random rng(6);
  const std::size_t d = 3;
  const auto vop = rng.tensor(Shape{d * d, d * d});
  const auto rho = rng.tensor(Shape{d, d});
  for (std::size_t slot : {0u, 1u}) {
    const auto got = doubled_apply(vop, rho, slot);
    for (std::size_t x = 0; x < d; ++x)
      for (std::size_t y = 0; y < d; ++y) {
        double s = 0.0;
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            // slot 0 contracts the first tensor factor (the subject), slot 1 the second
            const std::size_t r = slot == 0 ? a * d + x : x * d + a;
            const std::size_t c = slot == 0 ? b * d + y : y * d + b;
            s += vop[r * d * d + c] * rho[a * d + b];
          }
        CHECK(std::abs(got.at({x, y}) - s) < 1e-13);
      }
  }
}

TEST_CASE("adjective and relative clause closed forms agree with the diagram") {
  oracle::Random rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t d = rng.index(1, 4);
    const auto sp = SpaceAssignment::unified(d);
    const auto a = rng.tensor(Shape{d}), n = rng.tensor(Shape{d}), arg = rng.tensor(Shape{d});
    const auto v = rng.tensor(Shape{d, d});
    CHECK(max_abs_diff(compose_pure<RealField>({pure("a", "n.n^l", a, Tag::AdjectiveCopy), pure("n", "n", n)}, T("n"), sp),
                       adjective_closed(a, n)) < 1e-13);

    const W that_s{"that", T("n^r.n.s^l.n"), {}, false, Tag::RelPronoun};
    const W that_o{"that", T("n^r.n.n^l^l.s^l"), {}, false, Tag::RelPronoun};
    const auto subj_rel = compose_pure<RealField>(
        {pure("n", "n", n), that_s, pure("v", "n^r.s.n^l", v, Tag::VerbCopyObject), pure("x", "n", arg)}, T("n"), sp);
    CHECK(max_abs_diff(subj_rel, relative_clause(n, v, arg, RelativeSide::Subject)) < 1e-12);
    const auto obj_rel = compose_pure<RealField>(
        {pure("n", "n", n), that_o, pure("x", "n", arg), pure("v", "n^r.s.n^l", v, Tag::VerbCopySubject)}, T("n"), sp);
    CHECK(max_abs_diff(obj_rel, relative_clause(n, v, arg, RelativeSide::Object)) < 1e-12);

    const auto ra = random_density(rng, d), rn = random_density(rng, d), rarg = random_density(rng, d);
    const auto pa = cpm::PositiveOperator::from_matrix(ra), pn = cpm::PositiveOperator::from_matrix(rn);
    const auto parg = cpm::PositiveOperator::from_matrix(rarg);
    CHECK(max_abs_diff(compose_density_matrix<RealField>({dens("a", "n.n^l", ra, Tag::AdjectiveCopy), dens("n", "n", rn)},
                                                         T("n"), sp),
                       adjective_closed(pa, pn).matrix()) < 1e-13);
    const auto vop = random_verb_op(rng, d);
    W that_sd = that_s, that_od = that_o;
    that_sd.density = that_od.density = true;
    const auto subj_d = compose_density_matrix<RealField>(
        {dens("n", "n", rn), that_sd, dens("v", "n^r.s.n^l", vop, Tag::VerbCopyObject), dens("x", "n", rarg)}, T("n"), sp);
    CHECK(max_abs_diff(subj_d, relative_clause(pn, vop, parg, RelativeSide::Subject).matrix()) < 1e-12);
    const auto obj_d = compose_density_matrix<RealField>(
        {dens("n", "n", rn), that_od, dens("x", "n", rarg), dens("v", "n^r.s.n^l", vop, Tag::VerbCopySubject)}, T("n"), sp);
    CHECK(max_abs_diff(obj_d, relative_clause(pn, vop, parg, RelativeSide::Object).matrix()) < 1e-12);
  }
  // hand example
  const auto r = relative_clause(V({1, 1}), RealTensor::matrix({{1, 0}, {0, 0}}), V({1, 1}), RelativeSide::Subject);
  CHECK(r == V({1, 0}));
  CHECK(relative_clause(V({2, 3}), linalg::identity(2), V({4, 5}), RelativeSide::Object) == V({8, 15}));
}

TEST_CASE("density composition of pure words is the lift of the pure result") {
  oracle::Random rng(8);
  const auto sp = SpaceAssignment::split(3, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n1 = rng.tensor(Shape{3}), n2 = rng.tensor(Shape{3});
    const auto adj = rng.tensor(Shape{3, 3});
    const auto verb = rng.tensor(Shape{3, 2, 3});
    for (const auto& words : {std::vector<W>{pure("a", "n", n1)},
                              std::vector<W>{pure("adj", "n.n^l", adj), pure("a", "n", n1)},
                              std::vector<W>{pure("a", "n", n1), pure("v", "n^r.s.n^l", verb), pure("b", "n", n2)}}) {
      const auto target = words.size() == 3 ? T("s") : T("n");
      const auto rho = cpm::normalize(compose_density(words, target, sp));
      const auto lifted = cpm::lift_pure(compose_pure(words, target, sp));
      CHECK(max_abs_diff(rho.matrix(), lifted.matrix()) < 1e-8);
    }
  }
}

TEST_CASE("density composition is linear in mixtures") {
  oracle::Random rng(9);
  const auto sp = SpaceAssignment::split(2, 2);
  const auto s1 = rng.tensor(Shape{2}), s2 = rng.tensor(Shape{2}), o = rng.tensor(Shape{2});
  const auto verb = rng.tensor(Shape{2, 2, 2});
  const auto mixed_subject = added(scaled(linalg::outer(s1, s1), 0.3), scaled(linalg::outer(s2, s2), 0.7));
  const auto got = compose_density_matrix<RealField>(
      {dens("s", "n", mixed_subject), pure("v", "n^r.s.n^l", verb), pure("o", "n", o)}, T("s"), sp);
  const auto r1 = compose_pure<RealField>({pure("s", "n", s1), pure("v", "n^r.s.n^l", verb), pure("o", "n", o)}, T("s"), sp);
  const auto r2 = compose_pure<RealField>({pure("s", "n", s2), pure("v", "n^r.s.n^l", verb), pure("o", "n", o)}, T("s"), sp);
  const auto want = added(scaled(linalg::outer(r1, r1), 0.3), scaled(linalg::outer(r2, r2), 0.7));
  CHECK(max_abs_diff(got, want) < 1e-13);
}

TEST_CASE("non-commutative composition") {
  oracle::Random rng(10);
  CHECK(compose_noncomm({linalg::identity(3), linalg::identity(3)}, {0, 1}) == linalg::identity(3));
  const auto a = rng.tensor(Shape{3, 3}), b = rng.tensor(Shape{3, 3});
  CHECK(oracle::max_diff(oracle::to_mat(compose_noncomm({a, b}, {1, 0})), oracle::matmul(oracle::to_mat(b), oracle::to_mat(a))) <
        1e-14);
  const auto w = V({0.6, 0.8});
  const auto rho = RealTensor::matrix({{0.7, 0.1}, {0.1, 0.3}});
  CHECK(max_abs_diff(compose_noncomm({linalg::outer(w, w), rho}, {0, 1}), linalg::matmul(linalg::outer(w, w), rho)) < 1e-15);
  CHECK_THROWS_AS(compose_noncomm({a}, {1}), ShapeError);
  CHECK_THROWS_AS(compose_noncomm({a}, {}), ShapeError);
}

TEST_CASE("TNSR1 and DMAT1") {
  oracle::Random rng(11);
  const auto t = rng.tensor(Shape{2, 3, 2});
  std::stringstream ss;
  io::write_tensor(ss, t);
  CHECK(ss.str().rfind("TNSR1 3\n2 3 2\n", 0) == 0);
  CHECK(io::read_tensor(ss) == t);
  const auto m = rng.tensor(Shape{3, 3});
  std::stringstream ds;
  io::write_dmat(ds, m);
  CHECK(ds.str().rfind("DMAT1 3\n", 0) == 0);
  CHECK(io::read_dmat(ds) == m);
  std::stringstream bad("TNSR1 2\n2 2\n1 2 3\n");
  CHECK_THROWS_AS(io::read_tensor(bad), ParseError);
  std::stringstream junk("DMAT1 2\n1 x\n0 1\n");
  CHECK_THROWS_AS(io::read_dmat(junk), ParseError);
  const auto dir = temp_dir("mixsem_formats");
  io::save_dmat(dir / "a.dmat", m);
  io::save_tensor(dir / "b.tnsr", t);
  CHECK(io::load_any(dir / "a.dmat") == m);
  CHECK(io::load_any(dir / "b.tnsr") == t);
  CHECK_THROWS_AS(io::load_any(dir / "missing"), DataError);
}

TEST_CASE("lexicon files and sentence evaluation") {
  const auto dir = temp_dir("mixsem_lexicon");
  io::save_tensor(dir / "dog.tnsr", V({0.6, 0.8}));
  io::save_dmat(dir / "bank.dmat", RealTensor::matrix({{0.5, 0}, {0, 0.5}}));
  io::save_tensor(dir / "chase.tnsr", RealTensor::matrix({{1, 0}, {0, 1}}));
  io::save_tensor(dir / "red.tnsr", V({1, 0}));
  {
    std::ofstream f(dir / "lex.txt");
    f << "# toy\n"
         "dim n 2\ndim s 2\nunified\n"
         "word dog n given pure dog.tnsr\n"
         "word bank n given density bank.dmat\n"
         "word chases n^r.s.n^l verb-copy-object pure chase.tnsr\n"
         "word red n.n^l adjective-copy pure red.tnsr\n"
         "word that n^r.n.s^l.n relpron pure -\n";
  }
  const auto lex = Lexicon::load(dir / "lex.txt");
  CHECK(lex.entries.size() == 5);
  CHECK_THROWS_AS(lex.lookup("cat"), DataError);

  const auto pure_m = evaluate(lex, tokenize("dog chases dog"), Mode::Pure);
  const auto v = copy_closed(RealTensor::matrix({{1, 0}, {0, 1}}), V({0.6, 0.8}), V({0.6, 0.8}), CopySide::Object);
  CHECK(max_abs_diff(pure_m.matrix, linalg::outer(v, v)) < 1e-14);
  CHECK(pure_m.trace.find("eps^r") != std::string::npos);

  const auto full = evaluate(lex, tokenize("red bank"), Mode::Density, T("n"));
  const auto closed = evaluate(lex, tokenize("red bank"), Mode::DensityFrobenius, T("n"));
  CHECK(closed.closed_form);
  CHECK(max_abs_diff(full.matrix, closed.matrix) < 1e-14);
  CHECK(max_abs_diff(closed.matrix, RealTensor::matrix({{0.5, 0}, {0, 0}})) < 1e-15);

  const auto rel_full = evaluate(lex, tokenize("bank that chases dog"), Mode::Density, T("n"));
  const auto rel_closed = evaluate(lex, tokenize("bank that chases dog"), Mode::DensityFrobenius, T("n"));
  CHECK(rel_closed.closed_form);
  CHECK(max_abs_diff(rel_full.matrix, rel_closed.matrix) < 1e-14);

  CHECK_THROWS_AS(evaluate(lex, tokenize("dog dog"), Mode::Pure), NoReduction);
  CHECK_THROWS_AS(evaluate(lex, tokenize("dog"), Mode::Noncommutative), DataError);
  const auto nc = evaluate(lex, tokenize("red bank"), Mode::Noncommutative, std::nullopt, {0, 1});
  CHECK(max_abs_diff(nc.matrix, RealTensor::matrix({{0.5, 0}, {0, 0}})) < 1e-15);

  std::istringstream bad("dim n 2\ndim s 2\nword x n given pure nothere.tnsr\n");
  CHECK_THROWS_AS(Lexicon::parse(bad, dir), DataError);
  std::istringstream bad2("dim n two\n");
  CHECK_THROWS_AS(Lexicon::parse(bad2, dir), ParseError);
  std::istringstream bad3("dim n 3\ndim s 2\nword dog n given pure dog.tnsr\n");
  CHECK_THROWS_AS(Lexicon::parse(bad3, dir), ShapeError);
}
