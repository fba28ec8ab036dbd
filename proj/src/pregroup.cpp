#include "mixsem/pregroup.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "mixsem/error.hpp"

namespace mixsem::pregroup {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

AtomicType parse_atom(std::string_view text, const Grammar& grammar) {
  text = trim(text);
  std::size_t i = 0;
  while (i < text.size() && is_symbol_char(text[i])) ++i;
  if (i == 0) throw ParseError("malformed type expression: empty atom in '" + std::string(text) + "'");
  AtomicType atom{std::string(text.substr(0, i)), 0};
  if (!grammar.is_basic(atom.base)) throw ParseError("unknown basic type '" + atom.base + "'");
  while (i < text.size()) {
    if (text[i] != '^' || i + 1 >= text.size()) {
      throw ParseError("malformed type expression near '" + std::string(text.substr(i)) + "'");
    }
    const char side = text[i + 1];
    if (side == 'l') {
      --atom.adjoint;
    } else if (side == 'r') {
      ++atom.adjoint;
    } else {
      throw ParseError(std::string("malformed adjoint marker '^") + side + "'");
    }
    i += 2;
  }
  return atom;
}

}  // namespace

PregroupType parse_type(std::string_view text, const Grammar& grammar) {
  text = trim(text);
  PregroupType t;
  if (text.empty() || text == "1") return t;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const std::string_view piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    t.atoms.push_back(parse_atom(piece, grammar));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return t;
}

std::string to_string(const AtomicType& a) {
  std::string s = a.base;
  const char mark = a.adjoint < 0 ? 'l' : 'r';
  for (int k = 0; k < std::abs(a.adjoint); ++k) {
    s += '^';
    s += mark;
  }
  return s;
}

std::string to_string(const PregroupType& t) {
  if (t.atoms.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < t.atoms.size(); ++i) {
    if (i) s += '.';
    s += to_string(t.atoms[i]);
  }
  return s;
}

PregroupType adjoint(const PregroupType& t, Side side) {
  PregroupType out;
  const int delta = side == Side::Left ? -1 : 1;
  for (auto it = t.atoms.rbegin(); it != t.atoms.rend(); ++it) out.atoms.push_back({it->base, it->adjoint + delta});
  return out;
}

PregroupType concat(const PregroupType& a, const PregroupType& b) {
  PregroupType out = a;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  return out;
}

FlatSentence flatten(const std::vector<PregroupType>& types) {
  FlatSentence s;
  for (std::size_t w = 0; w < types.size(); ++w) {
    for (const auto& a : types[w].atoms) {
      s.atoms.push_back(a);
      s.word_of.push_back(w);
    }
  }
  return s;
}

Reduction reduce_greedy(const std::vector<PregroupType>& types) {
  if (types.empty()) throw NoReduction("cannot reduce an empty sentence");
  const FlatSentence flat = flatten(types);
  Reduction r;
  std::vector<std::size_t> stack;
  for (std::size_t pos = 0; pos < flat.atoms.size(); ++pos) {
    const AtomicType& incoming = flat.atoms[pos];
    if (!stack.empty()) {
      const AtomicType& top = flat.atoms[stack.back()];
      if (top.base == incoming.base && incoming.adjoint == top.adjoint + 1) {
        r.contractions.push_back({stack.back(), pos, top.adjoint < 0 ? CapKind::EpsLeft : CapKind::EpsRight});
        stack.pop_back();
        continue;
      }
    }
    stack.push_back(pos);
  }
  for (std::size_t pos : stack) r.residual.atoms.push_back(flat.atoms[pos]);
  r.residual_positions = std::move(stack);
  return r;
}

Reduction reduce(const std::vector<PregroupType>& types, const PregroupType& target) {
  Reduction r = reduce_greedy(types);
  if (r.residual != target) {
    throw NoReduction("sentence reduces to " + to_string(r.residual) + ", not " + to_string(target));
  }
  return r;
}

std::string check_reduction(const FlatSentence& sentence, const Reduction& r) {
  const std::size_t n = sentence.atoms.size();
  std::vector<int> used(n, 0);
  for (const auto& c : r.contractions) {
    if (c.left >= c.right || c.right >= n) return "pair out of order or range";
    if (used[c.left]++ || used[c.right]++) return "pairs are not disjoint";
    const auto& a = sentence.atoms[c.left];
    const auto& b = sentence.atoms[c.right];
    if (a.base != b.base || b.adjoint != a.adjoint + 1) return "pair is not type-matched";
    const CapKind want = a.adjoint < 0 ? CapKind::EpsLeft : CapKind::EpsRight;
    if (c.kind != want) return "pair direction is wrong";
  }
  for (const auto& c : r.contractions) {
    for (const auto& d : r.contractions) {
      if (c.left < d.left && d.left < c.right && c.right < d.right) return "pairs cross";
    }
    // Open wires may not sit under a cap.
    for (std::size_t pos : r.residual_positions) {
      if (c.left < pos && pos < c.right) return "residual atom trapped under a cap";
    }
  }
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) open.push_back(i);
  }
  if (open != r.residual_positions) return "residual positions do not match uncontracted atoms";
  for (std::size_t k = 0; k < open.size(); ++k) {
    if (!(r.residual.atoms.at(k) == sentence.atoms[open[k]])) return "residual atoms do not match";
  }
  return {};
}

}  // namespace mixsem::pregroup
