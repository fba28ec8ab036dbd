// One line per acceptance criterion; nonzero exit status if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "mixsem/cli.hpp"
#include "mixsem/frobenius.hpp"
#include "mixsem/lexicon.hpp"
#include "mixsem/linalg.hpp"
#include "mixsem/rel.hpp"
#include "oracles.hpp"

using namespace mixsem;
using composition::SpaceAssignment;
using composition::Tag;
using pregroup::PregroupType;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using W = composition::WordState<RealField>;

const fs::path kData = fs::path(MIXSEM_SOURCE_DIR) / "data" / "synthetic";

int failures = 0;

void report(int n, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-34s %s\n", ok ? "PASS" : "FAIL", n, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

PregroupType T(const char* s) { return pregroup::parse_type(s); }

// Orthonormal columns by Gram-Schmidt.
oracle::Mat orthonormal(oracle::Random& rng, std::size_t d) {
  oracle::Mat q(d, oracle::Vec(d));
  for (std::size_t c = 0; c < d; ++c) {
    auto v = rng.vec(d);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < c; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += v[i] * q[i][p];
        for (std::size_t i = 0; i < d; ++i) v[i] -= dot * q[i][p];
      }
    double n = 0.0;
    for (double x : v) n += x * x;
    for (std::size_t i = 0; i < d; ++i) q[i][c] = v[i] / std::sqrt(n);
  }
  return q;
}

// 1
void rel_fixture() {
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const char* argv[] = {"mixsem", "demo-rel"};
  const int code = cli::run(2, argv, out, err);
  const auto m = rel::build_queen_lexicon();
  const bool amb = rel::eval_rel_operator(m, {"queen", "rules"}) == BoolTensor::matrix({{1, 0}, {0, 1}});
  const bool tt = rel::eval_rel_operator(m, {"queen", "rules", "england"}) == BoolTensor::matrix({{1, 0}, {0, 0}});
  const bool text = out.str() == "queen rules → AMBIGUOUS (1_S)\nqueen rules england → TRUE (pure)\n";
  const double secs = seconds_since(t0);
  report(1, "Rel fixture exactness", code == 0 && amb && tt && text && secs < 1.0,
         fmt("1_S %s, |true><true| %s, %.3f s", amb ? "ok" : "WRONG", tt ? "ok" : "WRONG", secs));
}

// 2
void entropy_units() {
  oracle::Random rng(2);
  double worst_pure = 0.0, worst_mix = 0.0;
  for (std::size_t d = 1; d <= 16; ++d) {
    auto v = rng.tensor(Shape{d});
    worst_pure = std::max(worst_pure, std::abs(cpm::von_neumann_entropy(cpm::lift_pure(v))));
  }
  for (std::size_t k = 1; k <= 16; ++k) {
    const std::size_t d = 16;
    const auto q = orthonormal(rng, d);
    cpm::SenseEnsemble e;
    for (std::size_t c = 0; c < k; ++c) {
      oracle::Vec col(d);
      for (std::size_t i = 0; i < d; ++i) col[i] = q[i][c];
      e.entries.push_back({1.0 / double(k), oracle::from_vec(col)});
    }
    worst_mix = std::max(worst_mix, std::abs(cpm::von_neumann_entropy(cpm::from_ensemble(e)) - std::log(double(k))));
  }
  report(2, "Entropy unit values", worst_pure <= 1e-8 && worst_mix <= 1e-8,
         fmt("max |S(pure)| %.2e, max |S - ln k| %.2e", worst_pure, worst_mix));
}

// 3
void frobenius_laws() {
  double real_dev = 0.0, bool_dev = 0.0;
  std::string failed;
  for (std::size_t d = 1; d <= 8; ++d) {
    for (auto kind : {frobenius::AlgebraKind::CommutativeBasis, frobenius::AlgebraKind::NoncommutativeFD}) {
      const auto r = frobenius::check_frobenius_laws(frobenius::FrobeniusAlgebra<RealField>::make(kind, d), 100, 30 + d);
      const auto b =
          frobenius::check_frobenius_laws(frobenius::FrobeniusAlgebra<BooleanSemiring>::make(kind, d), 100, 30 + d);
      real_dev = std::max(real_dev, r.max_deviation());
      bool_dev = std::max(bool_dev, b.max_deviation());
      if (!r.passed() || !b.passed()) failed += " " + frobenius::to_string(kind) + "/" + std::to_string(d);
    }
  }
  report(3, "Frobenius law suite", real_dev <= 1e-12 && bool_dev == 0.0 && failed.empty(),
         fmt("max deviation real %.2e, Boolean %.0f%s", real_dev, bool_dev, failed.c_str()));
}

// 4
template <Semiring S>
bool snakes_hold(const Tensor<S>& v) {
  const std::size_t d = v.size();
  const Tensor<S> eta = eta_state<S>(d);
  const std::vector<Tensor<S>> ev{eta, v}, ve{v, eta};
  return apply_wiring<S>({{{1, 2}}, {0}}, ev) == v && apply_wiring<S>({{{0, 1}}, {2}}, ve) == v &&
         apply_wiring<S>({{{0, 1}}, {2}}, ve) == v && apply_wiring<S>({{{1, 2}}, {0}}, ev) == v;
}

void yanking() {
  oracle::Random rng(4);
  int bad = 0, checked = 0;
  for (std::size_t d = 1; d <= 8; ++d) {
    for (int trial = 0; trial < 10; ++trial) {
      bad += !snakes_hold(rng.tensor(Shape{d}));
      bad += !snakes_hold(rng.bool_tensor(Shape{d}));
      checked += 2;
    }
    // every basis state too
    for (std::size_t i = 0; i < d; ++i) {
      RealTensor e(Shape{d});
      e[i] = 1.0;
      BoolTensor b(Shape{d});
      b[i] = 1;
      bad += !snakes_hold(e) + !snakes_hold(b);
      checked += 2;
    }
  }
  report(4, "Yanking suite", bad == 0, fmt("%d/%d states exact in all four identities", checked - bad, checked));
}

// 5
void cp_discrimination() {
  oracle::Random rng(5);
  int accepted = 0, total = 0;
  for (std::size_t d = 1; d <= 4; ++d)
    for (int trial = 0; trial < 20; ++trial, ++total)
      accepted += cpm::is_completely_positive(cpm::double_map(rng.tensor(Shape{rng.index(1, 4), d}))).completely_positive;
  const auto t = cpm::is_completely_positive(cpm::transpose_map(2));
  const auto fd = cpm::is_completely_positive(frobenius::fd_merge_map(2));
  report(5, "CP discrimination", accepted == total && !t.completely_positive && !fd.completely_positive,
         fmt("%d/%d doubled maps accepted; transpose min eig %.3f, F_D merge min eig %.3f", accepted, total,
             t.min_eigenvalue, fd.min_eigenvalue));
}

// 6
void closed_forms() {
  oracle::Random rng(6);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t d = rng.index(1, 6);
    const auto sp = SpaceAssignment::unified(d);
    const int kind = inst % 5;
    const auto a = rng.tensor(Shape{d}), b = rng.tensor(Shape{d});
    const auto v = rng.tensor(Shape{d, d});
    const auto ra = oracle::from_mat(rng.density(d, rng.index(1, d))), rb = oracle::from_mat(rng.density(d, rng.index(1, d)));
    const auto vop = oracle::from_mat(rng.density(d * d, rng.index(1, d * d)));
    const auto pa = cpm::PositiveOperator::from_matrix(ra), pb = cpm::PositiveOperator::from_matrix(rb);
    const auto P = [](const char* s, const char* t, RealTensor m, Tag tag) { return W{s, T(t), std::move(m), false, tag}; };
    const auto D = [](const char* s, const char* t, RealTensor m, Tag tag) { return W{s, T(t), std::move(m), true, tag}; };
    const W that_s{"that", T("n^r.n.s^l.n"), {}, false, Tag::RelPronoun};
    const W that_o{"that", T("n^r.n.n^l^l.s^l"), {}, false, Tag::RelPronoun};
    W that_sd = that_s, that_od = that_o;
    that_sd.density = that_od.density = true;
    double dp = 0.0, dd = 0.0;
    switch (kind) {
      case 0:
        dp = max_abs_diff(composition::compose_pure<RealField>({P("a", "n.n^l", a, Tag::AdjectiveCopy), P("n", "n", b, Tag::Given)},
                                                               T("n"), sp),
                          composition::adjective_closed(a, b));
        dd = max_abs_diff(composition::compose_density_matrix<RealField>(
                              {D("a", "n.n^l", ra, Tag::AdjectiveCopy), D("n", "n", rb, Tag::Given)}, T("n"), sp),
                          composition::adjective_closed(pa, pb).matrix());
        break;
      case 1:
      case 2: {
        const auto side = kind == 1 ? composition::CopySide::Subject : composition::CopySide::Object;
        const Tag tag = kind == 1 ? Tag::VerbCopySubject : Tag::VerbCopyObject;
        dp = max_abs_diff(composition::compose_pure<RealField>(
                              {P("s", "n", a, Tag::Given), P("v", "n^r.s.n^l", v, tag), P("o", "n", b, Tag::Given)}, T("s"), sp),
                          composition::copy_closed(v, a, b, side));
        dd = max_abs_diff(composition::compose_density_matrix<RealField>(
                              {D("s", "n", ra, Tag::Given), D("v", "n^r.s.n^l", vop, tag), D("o", "n", rb, Tag::Given)}, T("s"), sp),
                          composition::copy_closed(vop, pa, pb, side).matrix());
        break;
      }
      case 3:
        dp = max_abs_diff(composition::compose_pure<RealField>({P("n", "n", a, Tag::Given), that_s,
                                                                P("v", "n^r.s.n^l", v, Tag::VerbCopyObject), P("x", "n", b, Tag::Given)},
                                                               T("n"), sp),
                          composition::relative_clause(a, v, b, composition::RelativeSide::Subject));
        dd = max_abs_diff(composition::compose_density_matrix<RealField>(
                              {D("n", "n", ra, Tag::Given), that_sd, D("v", "n^r.s.n^l", vop, Tag::VerbCopyObject),
                               D("x", "n", rb, Tag::Given)},
                              T("n"), sp),
                          composition::relative_clause(pa, vop, pb, composition::RelativeSide::Subject).matrix());
        break;
      case 4:
        dp = max_abs_diff(composition::compose_pure<RealField>({P("n", "n", a, Tag::Given), that_o, P("x", "n", b, Tag::Given),
                                                                P("v", "n^r.s.n^l", v, Tag::VerbCopySubject)},
                                                               T("n"), sp),
                          composition::relative_clause(a, v, b, composition::RelativeSide::Object));
        dd = max_abs_diff(composition::compose_density_matrix<RealField>(
                              {D("n", "n", ra, Tag::Given), that_od, D("x", "n", rb, Tag::Given),
                               D("v", "n^r.s.n^l", vop, Tag::VerbCopySubject)},
                              T("n"), sp),
                          composition::relative_clause(pa, vop, pb, composition::RelativeSide::Object).matrix());
        break;
    }
    worst = std::max({worst, dp, dd});
  }
  report(6, "Closed form vs diagram", worst <= 1e-10,
         fmt("50 instances x {pure, doubled}, d <= 6, 10 per form, max deviation %.2e", worst));
}

// 7
void density_pure() {
  oracle::Random rng(7);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t dn = rng.index(1, 6), ds = rng.index(1, 4);
    const auto sp = SpaceAssignment::split(dn, ds);
    std::vector<W> words;
    PregroupType target = T("n");
    const auto P = [](const char* s, const char* t, RealTensor m) { return W{s, T(t), std::move(m), false, Tag::Given}; };
    switch (inst % 3) {
      case 0: words = {P("x", "n", rng.tensor(Shape{dn}))}; break;
      case 1: words = {P("adj", "n.n^l", rng.tensor(Shape{dn, dn})), P("x", "n", rng.tensor(Shape{dn}))}; break;
      case 2:
        words = {P("x", "n", rng.tensor(Shape{dn})), P("v", "n^r.s.n^l", rng.tensor(Shape{dn, ds, dn})),
                 P("y", "n", rng.tensor(Shape{dn}))};
        target = T("s");
        break;
    }
    const auto rho = cpm::normalize(composition::compose_density(words, target, sp)).matrix();
    const auto lifted = cpm::lift_pure(composition::compose_pure(words, target, sp)).matrix();
    worst = std::max(worst, max_abs_diff(rho, lifted));
  }
  report(7, "Density/pure consistency", worst <= 1e-8, fmt("50 sentences (N, Adj-N, N-V-N), max deviation %.2e", worst));
}

// 8
void table_direction() {
  const auto t0 = Clock::now();
  const auto table = report::run(report::Fixtures::load(kData / "fixtures.txt"), report::Config{});
  const double secs = seconds_since(t0);
  int below = 0, pairs = 0;
  double best_ratio = 1e300;
  std::string worst_pair;
  for (const auto& r : table.rows) {
    for (const auto& [mod, h] : {std::pair{r.fixture.mod1, r.mod1}, std::pair{r.fixture.mod2, r.mod2}}) {
      ++pairs;
      if (h < r.noun) ++below;
      else worst_pair += " " + r.fixture.noun + "/" + mod;
      best_ratio = std::min(best_ratio, h / r.noun);
    }
  }
  report(8, "Table direction (synthetic)", below == pairs && best_ratio < 0.1 && secs < 60.0,
         fmt("%d/%d pairs S(modified) < S(noun), min ratio %.4f, %.2f s%s", below, pairs, best_ratio, secs,
             worst_pair.c_str()));
}

// 9
void pipeline_recovery() {
  std::map<std::string, std::map<std::string, double>> shares;
  std::map<std::string, std::map<std::size_t, std::string>> labels;
  {
    std::ifstream in(kData / "planted.tsv");
    for (std::string line; std::getline(in, line);) {
      std::istringstream ls(line);
      std::string tag, key, a, b;
      if (!(ls >> tag >> key >> a >> b) || tag[0] == '#') continue;
      if (tag == "share") shares[key][a] = std::stod(b);
      if (tag == "label") labels[key][std::stoul(a)] = b;
    }
  }
  const auto corpus = wsi::load_corpus(kData / "corpus.txt");
  const auto space = wsi::build_space(corpus, wsi::SpaceConfig{});
  std::size_t pure_total = 0, all_total = 0;
  double worst_p = shares.empty() ? 1.0 : 0.0;
  std::string detail;
  for (const auto& [key, planted] : shares) {
    const auto ws = wsi::induce_word(space, corpus, key, wsi::ClusterConfig{});
    std::map<std::string, double> found;
    for (const auto& cluster : ws.clusters) {
      std::map<std::string, std::size_t> votes;
      for (std::size_t m : cluster) {
        const auto it = labels[key].find(ws.contexts[m].sentence);
        ++votes[it == labels[key].end() ? "?" : it->second];
      }
      const auto top = std::max_element(votes.begin(), votes.end(), [](auto& x, auto& y) { return x.second < y.second; });
      pure_total += top->second;
      all_total += cluster.size();
      found[top->first] += double(cluster.size()) / double(ws.total);
    }
    for (const auto& [sense, p] : planted) worst_p = std::max(worst_p, std::abs(found[sense] - p));
    detail += fmt(" %s:%zu", key.substr(0, key.find('|')).c_str(), ws.clusters.size());
  }
  const double purity = all_total ? double(pure_total) / double(all_total) : 0.0;
  report(9, "Pipeline recovery", purity >= 0.9 && worst_p <= 0.05,
         fmt("purity %.3f, max |p - planted| %.3f, clusters%s", purity, worst_p, detail.c_str()));
}

// 10
void cpm2_examples() {
  const auto dm = [](RealTensor m) { return cpm::DensityMatrix::from_matrix(std::move(m)); };
  const auto v = RealTensor::vector({0.6, 0.8});
  const auto pure = cpm::DoubleDensity::from_inner_states({{1.0, cpm::lift_pure(v)}});
  const auto orth = cpm::DoubleDensity::from_inner_states(
      {{0.5, dm(RealTensor::matrix({{1, 0}, {0, 0}}))}, {0.5, dm(RealTensor::matrix({{0, 0}, {0, 1}}))}});
  const auto inner = cpm::DoubleDensity::from_inner_states({{1.0, dm(RealTensor::matrix({{0.5, 0}, {0, 0.5}}))}});
  const double ln2 = std::log(2.0);
  const auto dev = [&](const cpm::DoubleDensity& D, double amb, double gen) {
    return std::max(std::abs(cpm::entropy_of(cpm::ambiguity_operator(D)) - amb),
                    std::abs(cpm::entropy_of(cpm::generality_operator(D)) - gen));
  };
  const double worst = std::max({dev(pure, 0, 0), dev(orth, ln2, ln2), dev(inner, 0, ln2)});
  report(10, "CPM^2 sanity", worst <= 1e-8, fmt("three examples, max deviation %.2e", worst));
}

// 11
void projection_law() {
  oracle::Random rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = rng.index(1, 6);
    const auto rho = oracle::from_mat(rng.density(d, rng.index(1, d)));
    auto w = rng.tensor(Shape{d});
    w = scaled(w, 1.0 / norm(w));
    const auto p = frobenius::mu_noncomm(linalg::outer(w, w), rho);
    const double expect = inner_product(w, linalg::apply(rho, w));
    worst = std::max(worst, max_abs_diff(linalg::matmul(p, p), scaled(p, expect)));
  }
  report(11, "Non-commutative projection law", worst <= 1e-10, fmt("100 pairs, d <= 6, max deviation %.2e", worst));
}

void guarded(const std::function<void()>& fn, int n, const char* name) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(n, name, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(rel_fixture, 1, "Rel fixture exactness");
  guarded(entropy_units, 2, "Entropy unit values");
  guarded(frobenius_laws, 3, "Frobenius law suite");
  guarded(yanking, 4, "Yanking suite");
  guarded(cp_discrimination, 5, "CP discrimination");
  guarded(closed_forms, 6, "Closed form vs diagram");
  guarded(density_pure, 7, "Density/pure consistency");
  guarded(table_direction, 8, "Table direction (synthetic)");
  guarded(pipeline_recovery, 9, "Pipeline recovery");
  guarded(cpm2_examples, 10, "CPM^2 sanity");
  guarded(projection_law, 11, "Non-commutative projection law");
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
