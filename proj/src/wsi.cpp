#include "mixsem/wsi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "mixsem/error.hpp"

namespace mixsem::wsi {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool looks_like_tag(std::string_view t) {
  if (t.empty()) return false;
  return std::all_of(t.begin(), t.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)) || c == '$'; });
}

// Runs fn(shard) for shard in [0, shards) on up to `threads` workers.
template <class Fn>
void parallel_shards(std::size_t shards, unsigned threads, Fn fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, shards));
  if (workers == 1) {
    for (std::size_t s = 0; s < shards; ++s) fn(s);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t s = w; s < shards; s += workers) fn(s);
    });
  }
  for (auto& t : pool) t.join();
}

std::pair<std::size_t, std::size_t> shard_range(std::size_t n, std::size_t shards, std::size_t s) {
  return {n * s / shards, n * (s + 1) / shards};
}

std::vector<std::pair<std::size_t, double>> parse_sparse(std::istringstream& ls, std::size_t dim, const std::string& where) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::string item; ls >> item;) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError(where + ": expected idx:value, got '" + item + "'");
    std::size_t idx = 0;
    double val = 0.0;
    try {
      std::size_t used = 0;
      idx = std::stoul(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("index");
      const std::string rest = item.substr(colon + 1);
      val = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("value");
    } catch (const std::logic_error&) {
      throw ParseError(where + ": bad entry '" + item + "'");
    }
    if (idx >= dim) throw ParseError(where + ": index " + std::to_string(idx) + " out of range");
    out.emplace_back(idx, val);
  }
  return out;
}

void write_sparse(std::ostream& os, const RealTensor& v) {
  bool first = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    os << (first ? "" : " ") << i << ':' << format_weight(v[i]);
    first = false;
  }
}

RealTensor mean_of(const std::vector<RealTensor>& vs, const std::vector<std::size_t>& members) {
  RealTensor acc(vs.at(members.front()).shape());
  for (std::size_t m : members) acc = added(acc, vs[m]);
  return scaled(acc, 1.0 / static_cast<double>(members.size()));
}

}  // namespace

bool Token::content() const { return pos == "N" || pos == "V" || pos == "J" || pos == "R" || pos == "X"; }

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

Token parse_token(std::string_view raw) {
  const auto us = raw.rfind('_');
  if (us != std::string_view::npos && us > 0 && looks_like_tag(raw.substr(us + 1))) {
    const std::string_view tag = raw.substr(us + 1);
    std::string pos(tag);
    if (tag[0] == 'N' || tag[0] == 'V' || tag[0] == 'J' || tag[0] == 'R') pos = std::string(1, tag[0]);
    // RP, WRB and friends start with R or W but are not adverbs of content.
    if (tag == "RP" || tag == "PRP" || tag == "PRP$") pos = std::string(tag);
    return {lower(raw.substr(0, us)), pos};
  }
  return {lower(raw), "X"};
}

Corpus parse_corpus(std::istream& in) {
  Corpus c;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    Sentence s;
    for (std::string tok; ls >> tok;) s.push_back(parse_token(tok));
    if (!s.empty()) c.sentences.push_back(std::move(s));
  }
  return c;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus '" + path.string() + "'");
  return parse_corpus(in);
}

const std::set<std::string>& default_stoplist() {
  static const std::set<std::string> words{
      "get",   "take",  "really", "always", "be",    "have",  "do",    "make",  "go",     "say",   "also",
      "very",  "just",  "so",     "then",   "now",   "here",  "there", "thing", "way",    "time",  "lot",
      "often", "still", "even",   "much",   "many",  "more",  "most",  "other", "such",   "own",   "same",
      "well",  "only",  "never",  "ever",   "again", "too",   "quite", "rather", "almost", "yet",  "already",
      "come",  "give",  "use",    "put",    "seem",  "let",   "like",  "one",   "new",    "good",  "great"};
  return words;
}

std::set<std::string> load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stop-list '" + path.string() + "'");
  std::set<std::string> out;
  for (std::string w; in >> w;) out.insert(lower(w));
  return out;
}

const RealTensor* CooccurrenceSpace::find(const std::string& key) const {
  const auto it = vectors.find(key);
  return it == vectors.end() ? nullptr : &it->second;
}

CooccurrenceSpace build_space(const Corpus& corpus, const SpaceConfig& config) {
  if (corpus.sentences.empty()) throw DataError("empty corpus");
  if (config.window == 0) throw DataError("window must be at least 1");
  if (config.basis_size == 0) throw DataError("basis size must be positive");
  const std::size_t n = corpus.sentences.size();
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(n, 4 * std::max(1u, config.threads)));

  // Pass 1: token frequencies.
  std::vector<std::map<std::string, std::uint64_t>> freq_parts(shards);
  parallel_shards(shards, config.threads, [&](std::size_t s) {
    const auto [lo, hi] = shard_range(n, shards, s);
    for (std::size_t i = lo; i < hi; ++i) {
      for (const auto& t : corpus.sentences[i]) {
        if (t.content()) ++freq_parts[s][t.key()];
      }
    }
  });
  CooccurrenceSpace space;
  space.total = corpus.token_count();
  for (const auto& part : freq_parts) {
    for (const auto& [k, c] : part) space.target_count[k] += c;
  }

  std::vector<std::pair<std::string, std::uint64_t>> ranked;
  for (const auto& [k, c] : space.target_count) {
    const std::string lemma = k.substr(0, k.rfind('|'));
    if (!config.stoplist.count(lemma)) ranked.emplace_back(k, c);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > config.basis_size) ranked.resize(config.basis_size);
  if (ranked.empty()) throw DataError("no basis words left after stop-word filtering");
  for (const auto& [k, c] : ranked) {
    space.basis_index[k] = space.basis.size();
    space.basis.push_back(k);
    space.context_count.push_back(c);
  }
  const std::size_t dim = space.basis.size();

  // Pass 2: windowed co-occurrence counts per target.
  using Counts = std::map<std::string, std::map<std::size_t, std::uint64_t>>;
  std::vector<Counts> parts(shards);
  parallel_shards(shards, config.threads, [&](std::size_t s) {
    const auto [lo, hi] = shard_range(n, shards, s);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& sent = corpus.sentences[i];
      std::vector<std::ptrdiff_t> idx(sent.size(), -1);
      for (std::size_t p = 0; p < sent.size(); ++p) {
        if (const auto it = space.basis_index.find(sent[p].key()); it != space.basis_index.end()) {
          idx[p] = static_cast<std::ptrdiff_t>(it->second);
        }
      }
      for (std::size_t p = 0; p < sent.size(); ++p) {
        if (!sent[p].content()) continue;
        auto& row = parts[s][sent[p].key()];
        const std::size_t from = p >= config.window ? p - config.window : 0;
        const std::size_t to = std::min(sent.size() - 1, p + config.window);
        for (std::size_t q = from; q <= to; ++q) {
          if (q != p && idx[q] >= 0) ++row[static_cast<std::size_t>(idx[q])];
        }
      }
    }
  });
  Counts merged;
  for (const auto& part : parts) {
    for (const auto& [k, row] : part) {
      auto& dst = merged[k];
      for (const auto& [i, c] : row) dst[i] += c;
    }
  }
  for (const auto& [k, count_t] : space.target_count) {
    RealTensor v(Shape{dim});
    if (const auto it = merged.find(k); it != merged.end()) {
      for (const auto& [i, c] : it->second) {
        const double denom = static_cast<double>(count_t) * static_cast<double>(space.context_count[i]);
        v[i] = denom > 0.0 ? static_cast<double>(c) * static_cast<double>(space.total) / denom : 0.0;
      }
    }
    space.vectors.emplace(k, std::move(v));
  }
  return space;
}

std::string format_weight(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void save_space(const std::filesystem::path& path, const CooccurrenceSpace& space) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "SPACE1 " << space.dim() << '\n';
  for (std::size_t i = 0; i < space.dim(); ++i) out << (i ? " " : "") << space.basis[i];
  out << '\n';
  for (const auto& [k, v] : space.vectors) {
    out << k << '\t';
    write_sparse(out, v);
    out << '\n';
  }
}

CooccurrenceSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open space '" + path.string() + "'");
  std::string line;
  std::string magic;
  std::size_t dim = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> magic >> dim) || magic != "SPACE1" || dim == 0) {
    throw ParseError("'" + path.string() + "' is not a SPACE1 file");
  }
  CooccurrenceSpace space;
  if (!std::getline(in, line)) throw ParseError("SPACE1: missing basis line");
  std::istringstream bl(line);
  for (std::string k; bl >> k;) {
    space.basis_index[k] = space.basis.size();
    space.basis.push_back(k);
  }
  if (space.basis.size() != dim) throw ParseError("SPACE1: basis line lists " + std::to_string(space.basis.size()) + " words");
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("SPACE1 line " + std::to_string(lineno) + ": missing tab");
    std::istringstream ls(line.substr(tab + 1));
    RealTensor v(Shape{dim});
    for (const auto& [i, w] : parse_sparse(ls, dim, "SPACE1 line " + std::to_string(lineno))) v[i] = w;
    space.vectors.emplace(line.substr(0, tab), std::move(v));
  }
  return space;
}

RealTensor context_vector(const CooccurrenceSpace& space, const Sentence& sentence, const std::string& target_key) {
  RealTensor acc(Shape{space.dim()});
  std::size_t n = 0;
  for (const auto& t : sentence) {
    const std::string k = t.key();
    if (k == target_key) continue;
    if (const RealTensor* v = space.find(k)) {
      acc = added(acc, *v);
      ++n;
    }
  }
  if (n == 0) throw DataError("no context words with vectors for '" + target_key + "'");
  return scaled(acc, 1.0 / static_cast<double>(n));
}

double cosine_distance(const RealTensor& a, const RealTensor& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - inner_product(a, b) / (na * nb);
}

std::vector<std::vector<std::size_t>> agglomerative_cluster(const std::vector<RealTensor>& vectors,
                                                            const ClusterConfig& config) {
  const std::size_t n = vectors.size();
  if (n == 0) return {};
  // Cluster slots are named by their lowest member, so scanning slots in order
  // realises the lowest-index tie-break.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = cosine_distance(vectors[i], vectors[j]);
  }
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<bool> alive(n, true);
  std::size_t active = n;

  const auto merge = [&](std::size_t i, std::size_t j) {
    if (j < i) std::swap(i, j);
    const double ni = static_cast<double>(members[i].size());
    const double nj = static_cast<double>(members[j].size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == i || k == j) continue;
      const double d = (ni * dist[i * n + k] + nj * dist[j * n + k]) / (ni + nj);
      dist[i * n + k] = dist[k * n + i] = d;
    }
    members[i].insert(members[i].end(), members[j].begin(), members[j].end());
    std::sort(members[i].begin(), members[i].end());
    members[j].clear();
    alive[j] = false;
    --active;
  };

  const std::size_t floor_clusters = std::max<std::size_t>(1, config.min_clusters);
  while (active > floor_clusters) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (alive[j] && dist[i * n + j] < best) {
          best = dist[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    if (best > config.tau) break;
    merge(bi, bj);
  }

  // Fold undersized clusters into their nearest neighbour.
  while (active > floor_clusters) {
    std::size_t small = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i] && members[i].size() < config.min_cluster_size &&
          (small == n || members[i].size() < members[small].size())) {
        small = i;
      }
    }
    if (small == n) break;
    double best = std::numeric_limits<double>::infinity();
    std::size_t target = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (alive[k] && k != small && dist[small * n + k] < best) {
        best = dist[small * n + k];
        target = k;
      }
    }
    merge(small, target);
  }

  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) out.push_back(members[i]);
  }
  return out;
}

WordSenses induce_word(const CooccurrenceSpace& space, const Corpus& corpus, const std::string& key,
                       const ClusterConfig& config) {
  WordSenses ws;
  ws.key = key;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& sent = corpus.sentences[s];
    const auto it = std::find_if(sent.begin(), sent.end(), [&](const Token& t) { return t.key() == key; });
    if (it == sent.end()) continue;
    try {
      ws.context_vectors.push_back(context_vector(space, sent, key));
    } catch (const DataError&) {
      continue;  // a context without known words carries no evidence
    }
    ws.contexts.push_back({s, static_cast<std::size_t>(it - sent.begin())});
  }
  if (ws.contexts.empty()) throw DataError("no usable contexts for '" + key + "'");
  ws.clusters = agglomerative_cluster(ws.context_vectors, config);
  for (const auto& c : ws.clusters) {
    ws.centroids.push_back(mean_of(ws.context_vectors, c));
    ws.counts.push_back(c.size());
  }
  ws.total = ws.contexts.size();
  return ws;
}

SenseModel induce(const CooccurrenceSpace& space, const Corpus& corpus, const std::vector<std::string>& targets,
                  const InduceConfig& config) {
  std::vector<std::string> keys = targets;
  if (keys.empty()) {
    std::map<std::string, std::size_t> sentences_with;
    for (const auto& sent : corpus.sentences) {
      std::set<std::string> seen;
      for (const auto& t : sent) {
        if (t.content() && seen.insert(t.key()).second) ++sentences_with[t.key()];
      }
    }
    for (const auto& [k, c] : sentences_with) {
      if (c >= config.min_occurrences && space.find(k)) keys.push_back(k);
    }
  }
  std::vector<std::optional<WordSenses>> results(keys.size());
  std::vector<std::string> errors(keys.size());
  parallel_shards(keys.size(), config.threads, [&](std::size_t i) {
    try {
      results[i] = induce_word(space, corpus, keys[i], config.cluster);
    } catch (const DataError& e) {
      errors[i] = e.what();
    }
  });
  SenseModel model;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (results[i]) {
      model.emplace(keys[i], std::move(*results[i]));
    } else if (!targets.empty()) {
      throw DataError(errors[i]);
    }
  }
  return model;
}

ArgumentExtractor following_noun() {
  return [](const CooccurrenceSpace& space, const Sentence& s, std::size_t pos) -> std::optional<RealTensor> {
    for (std::size_t q = pos + 1; q < s.size(); ++q) {
      if (s[q].pos == "N") {
        if (const RealTensor* v = space.find(s[q].key())) return *v;
        return std::nullopt;
      }
      if (s[q].pos != "J") return std::nullopt;
    }
    return std::nullopt;
  };
}

ArgumentExtractor relative_subject() {
  return [](const CooccurrenceSpace& space, const Sentence& s, std::size_t pos) -> std::optional<RealTensor> {
    if (pos < 2 || s[pos - 1].lemma != "that" || s[pos - 2].pos != "N") return std::nullopt;
    if (const RealTensor* v = space.find(s[pos - 2].key())) return *v;
    return std::nullopt;
  };
}

RealTensor sense_tensor(const std::vector<std::vector<RealTensor>>& arguments, std::size_t arity) {
  if (arity == 0) throw DataError("sense_tensor: arity must be positive");
  if (arguments.empty()) throw DataError("sense_tensor: no contexts");
  std::optional<RealTensor> acc;
  for (const auto& args : arguments) {
    if (args.size() != arity) throw DataError("sense_tensor: context is missing an argument");
    RealTensor t = args[0];
    for (std::size_t k = 1; k < arity; ++k) t = tensor_product(t, args[k]);
    acc = acc ? added(*acc, t) : t;
  }
  return *acc;
}

void use_argument_senses(WordSenses& senses, const CooccurrenceSpace& space, const Corpus& corpus,
                         const ArgumentExtractor& extract) {
  for (std::size_t c = 0; c < senses.clusters.size(); ++c) {
    std::vector<std::vector<RealTensor>> args;
    for (std::size_t m : senses.clusters[c]) {
      const Context& ctx = senses.contexts[m];
      auto a = extract(space, corpus.sentences.at(ctx.sentence), ctx.position);
      if (!a) throw DataError("context " + std::to_string(ctx.sentence) + " of '" + senses.key + "' has no argument");
      args.push_back({std::move(*a)});
    }
    senses.centroids[c] = sense_tensor(args, 1);
  }
}

cpm::SenseEnsemble make_ensemble(const WordSenses& senses) {
  if (senses.centroids.empty() || senses.total == 0) throw DataError("'" + senses.key + "' has no senses");
  const std::size_t sum = std::accumulate(senses.counts.begin(), senses.counts.end(), std::size_t{0});
  if (sum != senses.total) throw InvariantViolation("sense counts do not add up for '" + senses.key + "'");
  cpm::SenseEnsemble e;
  for (std::size_t i = 0; i < senses.centroids.size(); ++i) {
    const double nrm = norm(senses.centroids[i]);
    if (nrm == 0.0) throw DataError("zero-norm sense vector for '" + senses.key + "'");
    e.entries.push_back({static_cast<double>(senses.counts[i]) / static_cast<double>(senses.total),
                         scaled(senses.centroids[i], 1.0 / nrm)});
  }
  return e;
}

cpm::SenseEnsemble make_ensemble(const std::vector<StoredSense>& senses) {
  if (senses.empty()) throw DataError("no senses");
  cpm::SenseEnsemble e;
  for (const auto& s : senses) {
    const double nrm = norm(s.vector);
    if (nrm == 0.0) throw DataError("zero-norm sense vector");
    e.entries.push_back({s.probability, scaled(s.vector, 1.0 / nrm)});
  }
  return e;
}

std::vector<std::size_t> top_k_support(const std::vector<RealTensor>& vectors, std::size_t k) {
  std::set<std::size_t> keep;
  for (const auto& v : vectors) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(v[a]) > std::abs(v[b]); });
    for (std::size_t i = 0; i < std::min(k, order.size()) && v[order[i]] != 0.0; ++i) keep.insert(order[i]);
  }
  if (keep.empty()) throw DataError("top_k_support: all vectors are zero");
  return {keep.begin(), keep.end()};
}

RealTensor restrict_to(const RealTensor& v, const std::vector<std::size_t>& support) {
  RealTensor out(Shape{support.size()});
  for (std::size_t i = 0; i < support.size(); ++i) out[i] = v.at({support[i]});
  return out;
}

cpm::SenseEnsemble restrict_ensemble(const cpm::SenseEnsemble& e, const std::vector<std::size_t>& support) {
  cpm::SenseEnsemble out;
  for (const auto& entry : e.entries) {
    RealTensor r = restrict_to(entry.state, support);
    const double nrm = norm(r);
    if (nrm == 0.0) throw DataError("a sense vanishes on the truncated support");
    out.entries.push_back({entry.probability, scaled(r, 1.0 / nrm)});
  }
  return out;
}

void save_senses(const std::filesystem::path& path, std::size_t dim, const SenseModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "SENSE1 " << dim << '\n';
  for (const auto& [k, ws] : model) {
    const auto e = make_ensemble(ws);
    for (const auto& entry : e.entries) {
      out << k << '\t' << format_weight(entry.probability) << '\t';
      write_sparse(out, entry.state);
      out << '\n';
    }
  }
}

SenseFile load_senses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open senses '" + path.string() + "'");
  std::string line, magic;
  SenseFile f;
  if (!std::getline(in, line) || !(std::istringstream(line) >> magic >> f.dim) || magic != "SENSE1" || f.dim == 0) {
    throw ParseError("'" + path.string() + "' is not a SENSE1 file");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "SENSE1 line " + std::to_string(lineno);
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError(where + ": expected key, probability and vector");
    StoredSense s;
    try {
      s.probability = std::stod(line.substr(t1 + 1, t2 - t1 - 1));
    } catch (const std::logic_error&) {
      throw ParseError(where + ": bad probability");
    }
    s.vector = RealTensor(Shape{f.dim});
    std::istringstream ls(line.substr(t2 + 1));
    for (const auto& [i, v] : parse_sparse(ls, f.dim, where)) s.vector[i] = v;
    f.words[line.substr(0, t1)].push_back(std::move(s));
  }
  return f;
}

}  // namespace mixsem::wsi
