#include "mixsem/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "mixsem/error.hpp"
#include "mixsem/formats.hpp"
#include "mixsem/lexicon.hpp"
#include "mixsem/rel.hpp"

namespace mixsem::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ParseError("config '" + key + "': '" + value + "' is not a number");
  if (!(out > T{})) throw ParseError("config '" + key + "' must be positive");
  return out;
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

cpm::PositiveOperator load_operator(const std::filesystem::path& p) {
  RealTensor m = io::load_any(p);
  if (m.rank() != 2) {
    std::size_t n = 1;
    while (n * n < m.size()) ++n;
    if (n * n != m.size()) throw ShapeError("'" + p.string() + "' does not hold a square operator");
    m = m.reshaped(Shape{n, n});
  }
  return cpm::PositiveOperator::from_matrix(std::move(m));
}

std::vector<std::size_t> parse_plan(const std::string& text) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ParseError("--plan expects comma-separated word positions, got '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string file_stem_of(const std::string& key) {
  std::string s = key;
  for (auto& c : s) {
    if (c == '|' || c == '/' || c == '\\') c = '_';
  }
  return s;
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  if (key == "basis_size") basis_size = parse_number<std::size_t>(key, value);
  else if (key == "window") window = parse_number<std::size_t>(key, value);
  else if (key == "stoplist") stoplist = value;
  else if (key == "tau") tau = parse_number<double>(key, value);
  else if (key == "min_cluster_size") min_cluster_size = parse_number<std::size_t>(key, value);
  else if (key == "min_clusters") min_clusters = parse_number<std::size_t>(key, value);
  else if (key == "min_occurrences") min_occurrences = parse_number<std::size_t>(key, value);
  else if (key == "top_k") top_k = parse_number<std::size_t>(key, value);
  else if (key == "threads") threads = parse_number<unsigned>(key, value);
  else if (key == "mode") {
    composition::parse_mode(value);
    mode = value;
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path.string() + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!trim(line).empty()) set(line);
  }
}

unsigned Config::worker_threads() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

wsi::SpaceConfig Config::space_config() const {
  wsi::SpaceConfig c;
  c.basis_size = basis_size;
  c.window = window;
  if (!stoplist.empty()) c.stoplist = wsi::load_stoplist(stoplist);
  c.threads = worker_threads();
  return c;
}

wsi::ClusterConfig Config::cluster_config() const {
  return {tau, min_cluster_size, min_clusters};
}

report::Config Config::report_config() const {
  report::Config c;
  c.space = space_config();
  c.cluster = cluster_config();
  c.top_k = top_k;
  c.threads = worker_threads();
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density-matrix compositional semantics toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  unsigned threads = 0;
  app.add_option("--config", config_path, "key=value settings file");
  app.add_option("--set", overrides, "override a setting (key=value)");
  app.add_option("--threads", threads, "worker threads (default: all cores)");

  std::string in1, in2, output;

  auto* build = app.add_subcommand("build-space", "co-occurrence space from a corpus");
  build->add_option("corpus", in1)->required();
  build->add_option("-o,--output", output)->required();

  std::vector<std::string> targets, following, relative;
  auto* induce = app.add_subcommand("induce", "cluster contexts into senses");
  induce->add_option("space", in1)->required();
  induce->add_option("corpus", in2)->required();
  induce->add_option("-o,--output", output)->required();
  induce->add_option("--target", targets, "lemma|POS keys (default: every word)");
  induce->add_option("--adjective", following, "keys whose senses sum the following noun");
  induce->add_option("--relative-verb", relative, "keys whose senses sum the noun before 'that'");

  std::size_t densify_k = 0;
  bool densify_k_set = false;
  auto* densify = app.add_subcommand("densify", "density matrix per word");
  densify->add_option("senses", in1)->required();
  densify->add_option("-o,--output", output, "output directory")->required();
  densify->add_option("--top-k", densify_k, "truncate to the top-k coordinates (0: keep all)")
      ->each([&](const std::string&) { densify_k_set = true; });

  std::string sentence, lexicon, mode, target, plan;
  bool trace = false;
  auto* compose = app.add_subcommand("compose", "meaning of a sentence");
  compose->add_option("sentence", sentence)->required();
  compose->add_option("--lexicon", lexicon)->required();
  compose->add_option("--mode", mode, "pure | density | density-frobenius | noncommutative");
  compose->add_option("-o,--output", output);
  compose->add_option("--target", target, "target type (default: the lexicon's)");
  compose->add_option("--plan", plan, "word order for the non-commutative merge, e.g. 2,1,0");
  compose->add_flag("--trace", trace, "print the contraction plan");

  auto* entropy = app.add_subcommand("entropy", "Von Neumann entropy of a normalised operator");
  entropy->add_option("dmat", in1)->required();

  auto* similar = app.add_subcommand("similar", "normalised trace similarity of two operators");
  similar->add_option("a", in1)->required();
  similar->add_option("b", in2)->required();

  auto* demo = app.add_subcommand("demo-rel", "the truth-theoretic queen example");

  std::string fixtures;
  auto* table = app.add_subcommand("report-table", "entropy table for noun/modifier fixtures");
  table->add_option("--fixtures", fixtures)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg.load(config_path);
    for (const auto& o : overrides) cfg.set(o);
    if (threads > 0) cfg.threads = threads;

    if (*build) {
      const auto space = wsi::build_space(wsi::load_corpus(in1), cfg.space_config());
      wsi::save_space(output, space);
      out << "basis " << space.dim() << ", targets " << space.vectors.size() << ", tokens " << space.total << '\n';
    } else if (*induce) {
      const auto space = wsi::load_space(in1);
      const auto corpus = wsi::load_corpus(in2);
      std::vector<std::string> keys = targets;
      keys.insert(keys.end(), following.begin(), following.end());
      keys.insert(keys.end(), relative.begin(), relative.end());
      wsi::InduceConfig ic;
      ic.cluster = cfg.cluster_config();
      ic.min_occurrences = cfg.min_occurrences;
      ic.threads = cfg.worker_threads();
      auto model = wsi::induce(space, corpus, keys, ic);
      for (const auto& k : following) wsi::use_argument_senses(model.at(k), space, corpus, wsi::following_noun());
      for (const auto& k : relative) wsi::use_argument_senses(model.at(k), space, corpus, wsi::relative_subject());
      wsi::save_senses(output, space.dim(), model);
      out << model.size() << " words\n";
    } else if (*densify) {
      const auto senses = wsi::load_senses(in1);
      const std::size_t k = densify_k_set ? densify_k : cfg.top_k;
      std::filesystem::create_directories(output);
      std::ofstream manifest(std::filesystem::path(output) / "manifest.tsv");
      if (!manifest) throw DataError("cannot write manifest in '" + output + "'");
      manifest << "# key\tfile\tsenses\tentropy\tsupport\n";
      for (const auto& [key, stored] : senses.words) {
        auto e = wsi::make_ensemble(stored);
        std::string support = "all";
        if (k > 0) {
          std::vector<RealTensor> states;
          for (const auto& s : e.entries) states.push_back(s.state);
          const auto idx = wsi::top_k_support(states, k);
          e = wsi::restrict_ensemble(e, idx);
          support.clear();
          for (std::size_t i = 0; i < idx.size(); ++i) support += (i ? "," : "") + std::to_string(idx[i]);
        }
        const auto rho = cpm::from_ensemble(e);
        const std::string file = file_stem_of(key) + ".dmat";
        io::save_dmat(std::filesystem::path(output) / file, rho.matrix());
        manifest << key << '\t' << file << '\t' << e.entries.size() << '\t' << fixed9(cpm::von_neumann_entropy(rho))
                 << '\t' << support << '\n';
      }
      out << senses.words.size() << " density matrices\n";
    } else if (*compose) {
      const auto lex = composition::Lexicon::load(lexicon);
      const auto m = composition::parse_mode(mode.empty() ? cfg.mode : mode);
      std::optional<pregroup::PregroupType> tgt;
      if (!target.empty()) tgt = pregroup::parse_type(target, lex.grammar);
      const auto meaning =
          composition::evaluate(lex, composition::tokenize(sentence), m, tgt, plan.empty() ? std::vector<std::size_t>{} : parse_plan(plan));
      if (trace) (output.empty() ? err : out) << meaning.trace << (meaning.closed_form ? "closed form\n" : "");
      if (output.empty()) {
        io::write_dmat(out, meaning.matrix);
      } else {
        io::save_dmat(output, meaning.matrix);
      }
    } else if (*entropy) {
      out << fixed9(cpm::entropy_of(load_operator(in1))) << '\n';
    } else if (*similar) {
      out << fixed9(cpm::similarity_normalized(load_operator(in1), load_operator(in2))) << '\n';
    } else if (*demo) {
      const auto model = rel::build_queen_lexicon();
      for (const std::string s : {"queen rules", "queen rules england"}) {
        out << s << " → " << rel::describe(rel::eval_rel_sentence(model, composition::tokenize(s))) << '\n';
      }
    } else if (*table) {
      const auto result = report::run(report::Fixtures::load(fixtures), cfg.report_config());
      out << report::format_table(result);
      char buf[64];
      std::snprintf(buf, sizeof buf, "pipeline %.2f s\n", result.seconds);
      out << buf;
    }
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}

}  // namespace mixsem::cli
