#pragma once

// Corpus to sense ensembles: co-occurrence space, sentence context vectors,
// agglomerative clustering of contexts, sense probabilities and sense tensors.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mixsem/cpm.hpp"
#include "mixsem/tensor.hpp"

namespace mixsem::wsi {

/// Lemma (lower case) plus coarse POS: N, V, J, R for content words, X for
/// untagged tokens, and the original tag otherwise.
struct Token {
  std::string lemma;
  std::string pos;

  std::string key() const { return lemma + "|" + pos; }
  bool content() const;
};

using Sentence = std::vector<Token>;

struct Corpus {
  std::vector<Sentence> sentences;
  std::size_t token_count() const;
};

/// `lemma_TAG` or a raw word. Tags map by their first letter (NN -> N,
/// VBZ -> V, JJ -> J, RB -> R).
Token parse_token(std::string_view raw);
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

const std::set<std::string>& default_stoplist();
std::set<std::string> load_stoplist(const std::filesystem::path& path);

struct SpaceConfig {
  std::size_t basis_size = 2000;
  std::size_t window = 5;
  std::set<std::string> stoplist = default_stoplist();  // lemmas
  unsigned threads = 1;
};

struct CooccurrenceSpace {
  std::vector<std::string> basis;  // keys, most frequent first
  std::map<std::string, std::size_t> basis_index;
  std::map<std::string, std::uint64_t> target_count;
  std::vector<std::uint64_t> context_count;
  std::uint64_t total = 0;
  std::map<std::string, RealTensor> vectors;

  std::size_t dim() const { return basis.size(); }
  const RealTensor* find(const std::string& key) const;
};

/// Counts co-occurrences within `window` tokens either side and sets
/// v_i(t) = count(c_i,t) count(total) / (count(t) count(c_i)), 0 where undefined.
/// Sentences are counted in shards on `threads` workers and merged in shard order.
CooccurrenceSpace build_space(const Corpus& corpus, const SpaceConfig& config);

void save_space(const std::filesystem::path& path, const CooccurrenceSpace& space);
CooccurrenceSpace load_space(const std::filesystem::path& path);

/// Mean of the vectors of the other words of the sentence (tokens with the
/// target's key are skipped). Throws DataError when no other word has a vector.
RealTensor context_vector(const CooccurrenceSpace& space, const Sentence& sentence, const std::string& target_key);

struct ClusterConfig {
  double tau = 0.8;
  std::size_t min_cluster_size = 5;
  std::size_t min_clusters = 1;
};

double cosine_distance(const RealTensor& a, const RealTensor& b);

/// Average-linkage agglomerative clustering under cosine distance. Merging stops
/// when the closest pair is farther than tau or min_clusters is reached; ties go
/// to the pair with the lowest member indices. Clusters smaller than
/// min_cluster_size are then folded into their nearest cluster. Clusters are
/// returned ordered by their lowest member, members ascending.
std::vector<std::vector<std::size_t>> agglomerative_cluster(const std::vector<RealTensor>& vectors,
                                                            const ClusterConfig& config);

struct Context {
  std::size_t sentence = 0;
  std::size_t position = 0;  // first occurrence of the target in the sentence
};

struct WordSenses {
  std::string key;
  std::vector<Context> contexts;
  std::vector<RealTensor> context_vectors;
  std::vector<std::vector<std::size_t>> clusters;  // indices into contexts
  std::vector<RealTensor> centroids;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

using SenseModel = std::map<std::string, WordSenses>;

/// Finds the argument vector a context supplies (for sense tensors).
using ArgumentExtractor =
    std::function<std::optional<RealTensor>(const CooccurrenceSpace&, const Sentence&, std::size_t position)>;

/// Next noun after the word (adjective modifying a noun).
ArgumentExtractor following_noun();
/// The noun before "that" right before the word ("noun that verb").
ArgumentExtractor relative_subject();

struct InduceConfig {
  ClusterConfig cluster;
  std::size_t min_occurrences = 1;
  unsigned threads = 1;
};

/// Clusters the sentence contexts of every requested target (all targets with
/// at least min_occurrences contexts when `targets` is empty).
SenseModel induce(const CooccurrenceSpace& space, const Corpus& corpus, const std::vector<std::string>& targets,
                  const InduceConfig& config);

WordSenses induce_word(const CooccurrenceSpace& space, const Corpus& corpus, const std::string& key,
                       const ClusterConfig& config);

/// Sum over the contexts of the n-fold tensor product of their argument vectors.
RealTensor sense_tensor(const std::vector<std::vector<RealTensor>>& arguments, std::size_t arity);

/// Replaces the centroids of `senses` by arity-1 sense tensors built from the
/// argument each context supplies. Throws DataError if a context has none.
void use_argument_senses(WordSenses& senses, const CooccurrenceSpace& space, const Corpus& corpus,
                         const ArgumentExtractor& extract);

/// p_i = count_i / total, states the unit-normalised sense vectors.
cpm::SenseEnsemble make_ensemble(const WordSenses& senses);

/// Union over the vectors of their k largest-magnitude coordinates, ascending.
std::vector<std::size_t> top_k_support(const std::vector<RealTensor>& vectors, std::size_t k);

RealTensor restrict_to(const RealTensor& v, const std::vector<std::size_t>& support);

/// The ensemble with every state restricted to `support` and renormalised.
cpm::SenseEnsemble restrict_ensemble(const cpm::SenseEnsemble& e, const std::vector<std::size_t>& support);

/// One line per sense: key TAB p TAB idx:val ... (after a SENSE1 header).
void save_senses(const std::filesystem::path& path, std::size_t dim, const SenseModel& model);

struct StoredSense {
  double probability = 0.0;
  RealTensor vector;
};

struct SenseFile {
  std::size_t dim = 0;
  std::map<std::string, std::vector<StoredSense>> words;
};

SenseFile load_senses(const std::filesystem::path& path);

cpm::SenseEnsemble make_ensemble(const std::vector<StoredSense>& senses);

/// Decimal with at least nine significant digits that round-trips.
std::string format_weight(double v);

}  // namespace mixsem::wsi
