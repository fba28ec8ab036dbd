#pragma once

// Corpus to entropy table: noun senses, modifier sense tensors, truncated
// density matrices, Frobenius composition and Von Neumann entropies.
//
// Fixtures file:
//   corpus corpus.txt          # relative to the fixtures file
//   rel <noun> <verb1> <verb2>  # "noun that verb"
//   adj <noun> <adj1> <adj2>    # "adj noun"

#include <filesystem>
#include <string>
#include <vector>

#include "mixsem/cpm.hpp"
#include "mixsem/wsi.hpp"

namespace mixsem::report {

enum class RowKind { Relative, Adjective };

struct FixtureRow {
  RowKind kind = RowKind::Adjective;
  std::string noun;
  std::string mod1, mod2;
};

struct Fixtures {
  std::filesystem::path corpus;
  std::vector<FixtureRow> rows;

  static Fixtures load(const std::filesystem::path& path);
};

struct Config {
  wsi::SpaceConfig space;
  wsi::ClusterConfig cluster;
  std::size_t top_k = 100;
  unsigned threads = 1;
};

struct Row {
  FixtureRow fixture;
  double noun = 0.0;
  double mod1 = 0.0;  // entropy of the noun composed with the first modifier
  double mod2 = 0.0;
  std::size_t support = 0;
};

struct Table {
  std::vector<Row> rows;
  wsi::SenseModel senses;  // every noun and modifier that was induced
  double seconds = 0.0;
};

/// Lemma|POS key of a fixture word: nouns N, relative-clause verbs V, adjectives J.
std::string noun_key(const std::string& noun);
std::string modifier_key(RowKind kind, const std::string& word);

Table run(const wsi::Corpus& corpus, const std::vector<FixtureRow>& rows, const Config& config);
Table run(const Fixtures& fixtures, const Config& config);

std::string format_table(const Table& table);

}  // namespace mixsem::report
