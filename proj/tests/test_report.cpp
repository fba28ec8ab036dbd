#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "mixsem/report.hpp"
#include "oracles.hpp"

using namespace mixsem;
using namespace mixsem::report;

namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = fs::path(MIXSEM_SOURCE_DIR) / "data" / "synthetic" / "fixtures.txt";

// Mixture of unit sense vectors restricted to the support, by loops.
oracle::Mat restricted_density(const wsi::WordSenses& ws, const std::vector<std::size_t>& support) {
  const std::size_t d = support.size();
  oracle::Mat rho(d, oracle::Vec(d, 0.0));
  for (std::size_t c = 0; c < ws.centroids.size(); ++c) {
    oracle::Vec v(d);
    double n = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = ws.centroids[c][support[i]];
      n += v[i] * v[i];
    }
    const double p = double(ws.counts[c]) / double(ws.total);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) rho[i][j] += p * v[i] * v[j] / n;
  }
  return rho;
}

double entropy(oracle::Mat m) {
  const double t = oracle::trace(m);
  return oracle::entropy_of_spectrum(oracle::eigen_symmetric(oracle::scale(m, 1.0 / t)));
}

}  // namespace

TEST_CASE("fixture files") {
  const auto f = Fixtures::load(kFixtures);
  CHECK(f.rows.size() == 10);
  CHECK(fs::exists(f.corpus));
  CHECK(f.rows[0].kind == RowKind::Relative);
  CHECK(f.rows[5].kind == RowKind::Adjective);
  CHECK(noun_key("organ") == "organ|N");
  CHECK(modifier_key(RowKind::Relative, "ache") == "ache|V");
  CHECK(modifier_key(RowKind::Adjective, "rusty") == "rusty|J");

  const auto dir = fs::temp_directory_path() / "mixsem_report";
  fs::create_directories(dir);
  std::ofstream(dir / "a.txt") << "corpus c.txt\nnoun organ x y\n";
  CHECK_THROWS_AS(Fixtures::load(dir / "a.txt"), ParseError);
  std::ofstream(dir / "b.txt") << "rel organ x y\n";
  CHECK_THROWS_AS(Fixtures::load(dir / "b.txt"), ParseError);
  std::ofstream(dir / "c.txt") << "corpus c.txt\nadj organ x\n";
  CHECK_THROWS_AS(Fixtures::load(dir / "c.txt"), ParseError);
  CHECK_THROWS_AS(Fixtures::load(dir / "missing.txt"), DataError);
}

TEST_CASE("eigenvalue oracle") {
  oracle::Random rng(1);
  for (std::size_t d = 1; d <= 12; ++d) {
    const auto rho = rng.density(d, rng.index(1, d));
    const auto ev = oracle::eigen_symmetric(rho);
    double sum = 0.0;
    for (double e : ev) sum += e;
    CHECK(std::abs(sum - oracle::trace(rho)) < 1e-10);
    double sq = 0.0, fro = 0.0;
    for (double e : ev) sq += e * e;
    for (const auto& r : rho)
      for (double x : r) fro += x * x;
    CHECK(std::abs(sq - fro) < 1e-10);
  }
  const auto two = rng.density(2, 2);
  const auto a = oracle::eigen_symmetric(two), b = oracle::eigen2(two);
  CHECK(std::abs(std::min(b[0], b[1]) - a[0]) < 1e-12);
}

TEST_CASE("table rows recomputed by loops") {
  const auto f = Fixtures::load(kFixtures);
  Config cfg;
  const auto table = run(f, cfg);
  REQUIRE(table.rows.size() == f.rows.size());

  // pooled supports, recomputed from the induced senses
  std::map<std::string, std::vector<RealTensor>> pooled;
  const auto unit_states = [&](const std::string& key, std::vector<RealTensor>& out) {
    for (const auto& c : table.senses.at(key).centroids) out.push_back(scaled(c, 1.0 / norm(c)));
  };
  for (const auto& r : f.rows) {
    auto& p = pooled[r.noun];
    if (p.empty()) unit_states(noun_key(r.noun), p);
    unit_states(modifier_key(r.kind, r.mod1), p);
    unit_states(modifier_key(r.kind, r.mod2), p);
  }

  for (const auto& row : table.rows) {
    const auto& r = row.fixture;
    const auto support = wsi::top_k_support(pooled.at(r.noun), cfg.top_k);
    CHECK(row.support == support.size());
    const auto noun = restricted_density(table.senses.at(noun_key(r.noun)), support);
    CHECK(std::abs(row.noun - entropy(noun)) < 1e-8);
    for (const auto& [mod, got] : {std::pair{r.mod1, row.mod1}, std::pair{r.mod2, row.mod2}}) {
      const auto m = restricted_density(table.senses.at(modifier_key(r.kind, mod)), support);
      CHECK_MESSAGE(std::abs(got - entropy(oracle::pointwise(noun, m))) < 1e-8, r.noun, " ", mod);
    }
  }
}

TEST_CASE("more threads give the same table") {
  const auto f = Fixtures::load(kFixtures);
  Config one, four;
  four.threads = 4;
  const auto a = run(f, one), b = run(f, four);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].noun == b.rows[i].noun);
    CHECK(a.rows[i].mod1 == b.rows[i].mod1);
    CHECK(a.rows[i].mod2 == b.rows[i].mod2);
  }
  const auto text = format_table(a);
  CHECK(text.find("organ: enchant/ache") != std::string::npos);
}
