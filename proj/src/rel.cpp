#include "mixsem/rel.hpp"

#include <algorithm>
#include <cctype>

namespace mixsem::rel {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

BoolTensor lift(const BoolTensor& v) { return tensor_product(v, v); }

// Operator of a noun-typed word, lifting pure meanings.
BoolTensor noun_operator(const QueenModel& m, const std::string& token) {
  const auto it = m.lexicon.find(lower(token));
  if (it == m.lexicon.end()) throw DataError("unknown token '" + token + "'");
  const auto& w = it->second;
  if (w.type != pregroup::parse_type("n")) throw DataError("'" + token + "' is not a noun");
  return w.density ? w.meaning : lift(w.meaning);
}

}  // namespace

RelSpace::RelSpace(std::vector<std::string> names) : names_(std::move(names)) {
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DataError("basis names must be unique");
  if (names_.empty()) throw DataError("empty basis");
}

std::size_t RelSpace::index(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DataError("unknown basis element '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

BoolTensor RelSpace::basis(const std::string& name) const {
  BoolTensor v(Shape{size()});
  v[index(name)] = 1;
  return v;
}

BoolTensor RelSpace::sum(const std::vector<std::string>& names) const {
  BoolTensor v(Shape{size()});
  for (const auto& n : names) v[index(n)] = 1;
  return v;
}

std::string to_string(SentenceValue v) {
  switch (v) {
    case SentenceValue::TT: return "TT";
    case SentenceValue::FF: return "FF";
    case SentenceValue::SUP: return "SUP";
    case SentenceValue::AMB: return "AMB";
  }
  return "?";
}

std::string describe(SentenceValue v) {
  switch (v) {
    case SentenceValue::TT: return "TRUE (pure)";
    case SentenceValue::FF: return "FALSE (pure)";
    case SentenceValue::SUP: return "SUPERPOSED (pure)";
    case SentenceValue::AMB: return "AMBIGUOUS (1_S)";
  }
  return "?";
}

BoolTensor value_operator(SentenceValue v) {
  switch (v) {
    case SentenceValue::TT: return BoolTensor::matrix({{1, 0}, {0, 0}});
    case SentenceValue::FF: return BoolTensor::matrix({{0, 0}, {0, 1}});
    case SentenceValue::SUP: return BoolTensor::matrix({{1, 1}, {1, 1}});
    case SentenceValue::AMB: return BoolTensor::matrix({{1, 0}, {0, 1}});
  }
  throw DataError("bad sentence value");
}

SentenceValue classify(const BoolTensor& m) {
  for (auto v : {SentenceValue::TT, SentenceValue::FF, SentenceValue::SUP, SentenceValue::AMB}) {
    if (m == value_operator(v)) return v;
  }
  throw DataError("sentence operator " + shape_string(m.shape()) + " is not one of the four truth values");
}

QueenModel build_queen_lexicon() {
  QueenModel m;
  const auto& N = m.nouns;
  const auto& S = m.sentences;
  m.spaces = composition::SpaceAssignment({{"n", N.size()}, {"s", S.size()}}, false);
  m.band = N.sum({"freddy", "brian"});

  const auto triple = [](const BoolTensor& a, const BoolTensor& b, const BoolTensor& c) {
    return tensor_product(tensor_product(a, b), c);
  };
  const auto join = [](BoolTensor a, const BoolTensor& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = BooleanSemiring::add(a[i], b[i]);
    return a;
  };
  m.rule = triple(m.band, S.basis("true"), N.basis("eps"));
  m.rule = join(m.rule, triple(N.basis("chess"), S.basis("false"), N.basis("eps")));
  m.rule = join(m.rule, triple(N.basis("elisabeth"), S.basis("true"), N.basis("england")));

  m.queen_density = lift(N.basis("elisabeth"));
  m.queen_density = join(m.queen_density, lift(m.band));
  m.queen_density = join(m.queen_density, lift(N.basis("chess")));

  const auto n = pregroup::parse_type("n");
  using W = composition::WordState<BooleanSemiring>;
  m.lexicon["queen"] = W{"queen", n, m.queen_density, true, composition::Tag::Given};
  m.lexicon["band"] = W{"band", n, m.band, false, composition::Tag::Given};
  for (const auto& name : N.names()) {
    if (name != "eps") m.lexicon[name] = W{name, n, N.basis(name), false, composition::Tag::Given};
  }
  m.lexicon["rules"] = W{"rules", pregroup::parse_type("n^r.s.n^l"), m.rule, false, composition::Tag::Given};
  return m;
}

BoolTensor eval_rel_operator(const QueenModel& m, const std::vector<std::string>& tokens) {
  std::vector<composition::WordState<BooleanSemiring>> words;
  for (const auto& t : tokens) {
    const auto it = m.lexicon.find(lower(t));
    if (it == m.lexicon.end()) throw DataError("unknown token '" + t + "'");
    words.push_back(it->second);
  }
  return composition::compose_density_matrix(words, pregroup::parse_type("s"), m.spaces);
}

SentenceValue eval_rel_sentence(const QueenModel& m, const std::vector<std::string>& tokens) {
  return classify(eval_rel_operator(m, tokens));
}

BoolTensor eval_rel_by_hand(const QueenModel& m, const std::vector<std::string>& tokens) {
  if ((tokens.size() != 2 && tokens.size() != 3) || lower(tokens[1]) != "rules") {
    throw DataError("the hand evaluator only reads 'subject rules [object]'");
  }
  const BoolTensor subj = noun_operator(m, tokens[0]);
  const bool has_obj = tokens.size() == 3;
  const BoolTensor obj = has_obj ? noun_operator(m, tokens[2]) : BoolTensor(Shape{1});
  const std::size_t n = m.nouns.size();
  const std::size_t s = m.sentences.size();
  BoolTensor out(Shape{s, s});
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      bool any = false;
      for (std::size_t i = 0; i < n && !any; ++i) {
        for (std::size_t i2 = 0; i2 < n && !any; ++i2) {
          if (!subj.at({i, i2})) continue;
          for (std::size_t o = 0; o < n && !any; ++o) {
            for (std::size_t o2 = 0; o2 < n && !any; ++o2) {
              const bool object_ok = has_obj ? obj.at({o, o2}) != 0 : true;
              any = object_ok && m.rule.at({i, a, o}) && m.rule.at({i2, b, o2});
            }
          }
        }
      }
      out.at({a, b}) = any ? 1 : 0;
    }
  }
  return out;
}

}  // namespace mixsem::rel
