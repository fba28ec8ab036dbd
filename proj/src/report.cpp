#include "mixsem/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mixsem/error.hpp"
#include "mixsem/lexicon.hpp"

namespace mixsem::report {

namespace {

using composition::Lexicon;
using composition::Tag;
using composition::WordState;

WordState<RealField> density_word(const std::string& surface, const std::string& type, Tag tag, const RealTensor& rho,
                                  const pregroup::Grammar& g) {
  WordState<RealField> w;
  w.surface = surface;
  w.type = pregroup::parse_type(type, g);
  w.tag = tag;
  w.density = true;
  w.meaning = rho;
  return w;
}

std::vector<RealTensor> states_of(const cpm::SenseEnsemble& e) {
  std::vector<RealTensor> out;
  for (const auto& s : e.entries) out.push_back(s.state);
  return out;
}

}  // namespace

Fixtures Fixtures::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open fixtures '" + path.string() + "'");
  Fixtures f;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const auto bad = [&](const std::string& what) { return ParseError("fixtures line " + std::to_string(lineno) + ": " + what); };
    if (key == "corpus") {
      std::string p;
      if (!(ls >> p)) throw bad("expected 'corpus <path>'");
      f.corpus = path.parent_path() / p;
    } else if (key == "rel" || key == "adj") {
      FixtureRow r;
      r.kind = key == "rel" ? RowKind::Relative : RowKind::Adjective;
      if (!(ls >> r.noun >> r.mod1 >> r.mod2)) throw bad("expected '" + key + " <noun> <modifier> <modifier>'");
      f.rows.push_back(r);
    } else {
      throw bad("unknown directive '" + key + "'");
    }
  }
  if (f.corpus.empty()) throw ParseError("fixtures name no corpus");
  if (f.rows.empty()) throw ParseError("fixtures list no rows");
  return f;
}

std::string noun_key(const std::string& noun) { return noun + "|N"; }

std::string modifier_key(RowKind kind, const std::string& word) {
  return word + (kind == RowKind::Relative ? "|V" : "|J");
}

Table run(const wsi::Corpus& corpus, const std::vector<FixtureRow>& rows, const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  wsi::SpaceConfig sc = config.space;
  sc.threads = config.threads;
  const wsi::CooccurrenceSpace space = wsi::build_space(corpus, sc);

  std::set<std::string> keys;
  std::map<std::string, RowKind> modifiers;
  for (const auto& r : rows) {
    keys.insert(noun_key(r.noun));
    for (const auto* m : {&r.mod1, &r.mod2}) {
      keys.insert(modifier_key(r.kind, *m));
      modifiers[modifier_key(r.kind, *m)] = r.kind;
    }
  }
  wsi::InduceConfig ic;
  ic.cluster = config.cluster;
  ic.threads = config.threads;
  Table table;
  table.senses = wsi::induce(space, corpus, {keys.begin(), keys.end()}, ic);
  for (const auto& [key, kind] : modifiers) {
    wsi::use_argument_senses(table.senses.at(key), space, corpus,
                             kind == RowKind::Relative ? wsi::relative_subject() : wsi::following_noun());
  }
  std::map<std::string, cpm::SenseEnsemble> ensembles;
  for (const auto& [key, ws] : table.senses) ensembles.emplace(key, wsi::make_ensemble(ws));

  // One support per noun, shared by every row that modifies it.
  std::map<std::string, std::vector<RealTensor>> pooled;
  for (const auto& r : rows) {
    auto& p = pooled[r.noun];
    if (p.empty()) p = states_of(ensembles.at(noun_key(r.noun)));
    for (const auto* m : {&r.mod1, &r.mod2}) {
      const auto s = states_of(ensembles.at(modifier_key(r.kind, *m)));
      p.insert(p.end(), s.begin(), s.end());
    }
  }

  for (const auto& r : rows) {
    const auto support = wsi::top_k_support(pooled.at(r.noun), config.top_k);
    const auto rho = [&](const std::string& key) {
      return cpm::from_ensemble(wsi::restrict_ensemble(ensembles.at(key), support)).matrix();
    };
    Lexicon lex;
    lex.grammar = pregroup::Grammar({"n", "s"});
    lex.spaces = composition::SpaceAssignment::unified(support.size());
    lex.target = pregroup::parse_type("n", lex.grammar);
    lex.entries.emplace(r.noun, density_word(r.noun, "n", Tag::Given, rho(noun_key(r.noun)), lex.grammar));
    if (r.kind == RowKind::Relative) {
      lex.entries.emplace("that", density_word("that", "n^r.n.s^l.n", Tag::RelPronoun, RealTensor{}, lex.grammar));
    }
    for (const auto* m : {&r.mod1, &r.mod2}) {
      const std::string type = r.kind == RowKind::Relative ? "n^r.s" : "n.n^l";
      lex.entries.emplace(*m, density_word(*m, type, Tag::AdjectiveCopy, rho(modifier_key(r.kind, *m)), lex.grammar));
    }
    const auto entropy = [&](const std::vector<std::string>& tokens) {
      const auto m = composition::evaluate(lex, tokens, composition::Mode::DensityFrobenius);
      return cpm::entropy_of(cpm::PositiveOperator::from_matrix(m.matrix));
    };
    const auto phrase = [&](const std::string& mod) {
      return r.kind == RowKind::Relative ? std::vector<std::string>{r.noun, "that", mod}
                                         : std::vector<std::string>{mod, r.noun};
    };
    Row row;
    row.fixture = r;
    row.support = support.size();
    row.noun = entropy({r.noun});
    row.mod1 = entropy(phrase(r.mod1));
    row.mod2 = entropy(phrase(r.mod2));
    table.rows.push_back(row);
  }
  table.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

Table run(const Fixtures& fixtures, const Config& config) {
  return run(wsi::load_corpus(fixtures.corpus), fixtures.rows, config);
}

std::string format_table(const Table& table) {
  std::ostringstream os;
  char buf[160];
  for (const RowKind kind : {RowKind::Relative, RowKind::Adjective}) {
    bool header = false;
    for (const auto& r : table.rows) {
      if (r.fixture.kind != kind) continue;
      if (!header) {
        if (kind == RowKind::Relative) {
          os << "Relative clauses\n";
          std::snprintf(buf, sizeof buf, "%-28s %8s %16s %16s\n", "noun: verb1/verb2", "noun", "noun that verb1",
                        "noun that verb2");
        } else {
          os << "Adjectives\n";
          std::snprintf(buf, sizeof buf, "%-28s %8s %16s %16s\n", "noun: adj1/adj2", "noun", "adj1 noun", "adj2 noun");
        }
        os << buf;
        header = true;
      }
      const std::string label = r.fixture.noun + ": " + r.fixture.mod1 + "/" + r.fixture.mod2;
      std::snprintf(buf, sizeof buf, "%-28s %8.4f %16.4f %16.4f\n", label.c_str(), r.noun, r.mod1, r.mod2);
      os << buf;
    }
    if (header) os << '\n';
  }
  return os.str();
}

}  // namespace mixsem::report
