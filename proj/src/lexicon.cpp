#include "mixsem/lexicon.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "mixsem/formats.hpp"
#include "mixsem/linalg.hpp"

namespace mixsem::composition {

namespace {

// Operator on the word's own space: |v><v| for pure meanings, the stored
// operator flattened to a square matrix otherwise.
RealTensor operator_of(const WordState<RealField>& w) {
  if (!w.density) {
    const RealTensor v = w.meaning.reshaped(Shape{w.meaning.size()});
    return linalg::outer(v, v);
  }
  std::size_t n = 1;
  while (n * n < w.meaning.size()) ++n;
  if (n * n != w.meaning.size()) throw ShapeError("word '" + w.surface + "': operator is not square");
  return w.meaning.reshaped(Shape{n, n});
}

bool is_noun(const WordState<RealField>& w) {
  return w.type == pregroup::PregroupType{{{"n", 0}}} && w.tag == Tag::Given;
}

bool is_copy_verb(const WordState<RealField>& w) {
  return w.tag == Tag::VerbCopyObject || w.tag == Tag::VerbCopySubject;
}

const PregroupType& subject_relpron_type() {
  static const PregroupType t = pregroup::parse_type("n^r.n.s^l.n");
  return t;
}

const PregroupType& object_relpron_type() {
  static const PregroupType t = pregroup::parse_type("n^r.n.n^l^l.s^l");
  return t;
}

// Closed forms for the shapes the Frobenius constructions cover; empty when
// the sentence has another shape.
std::optional<RealTensor> closed_form(const std::vector<WordState<RealField>>& w) {
  const auto op = [](const WordState<RealField>& x) { return cpm::PositiveOperator::from_matrix(operator_of(x)); };
  if (w.size() == 1 && is_noun(w[0])) return operator_of(w[0]);
  if (w.size() == 2 && w[0].tag == Tag::AdjectiveCopy && is_noun(w[1])) {
    return adjective_closed(op(w[0]), op(w[1])).matrix();
  }
  if (w.size() == 3 && is_noun(w[0]) && is_copy_verb(w[1]) && is_noun(w[2])) {
    const CopySide side = w[1].tag == Tag::VerbCopyObject ? CopySide::Object : CopySide::Subject;
    return copy_closed(operator_of(w[1]), op(w[0]), op(w[2]), side).matrix();
  }
  // "noun that verb" with an intransitive copied verb.
  if (w.size() == 3 && is_noun(w[0]) && w[1].tag == Tag::RelPronoun && w[1].type == subject_relpron_type() &&
      w[2].tag == Tag::AdjectiveCopy) {
    return frobenius::hadamard_double(op(w[0]), op(w[2])).matrix();
  }
  if (w.size() == 4 && is_noun(w[0]) && w[1].tag == Tag::RelPronoun) {
    if (w[1].type == subject_relpron_type() && is_copy_verb(w[2]) && is_noun(w[3])) {
      return relative_clause(op(w[0]), operator_of(w[2]), op(w[3]), RelativeSide::Subject).matrix();
    }
    if (w[1].type == object_relpron_type() && is_noun(w[2]) && is_copy_verb(w[3])) {
      return relative_clause(op(w[0]), operator_of(w[3]), op(w[2]), RelativeSide::Object).matrix();
    }
  }
  return std::nullopt;
}

}  // namespace

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon '" + path.string() + "'");
  return parse(in, path.parent_path());
}

Lexicon Lexicon::parse(std::istream& in, const std::filesystem::path& base_dir) {
  std::map<std::string, std::size_t> dims;
  bool unified = false;
  std::string target_text = "s";
  struct Pending {
    std::string surface, type, tag, kind, file;
    int line;
  };
  std::vector<Pending> pending;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const auto bad = [&](const std::string& what) {
      return ParseError("lexicon line " + std::to_string(lineno) + ": " + what);
    };
    if (key == "dim") {
      std::string base;
      long long d = 0;
      if (!(ls >> base >> d) || d <= 0) throw bad("expected 'dim <type> <positive size>'");
      dims[base] = static_cast<std::size_t>(d);
    } else if (key == "unified") {
      unified = true;
    } else if (key == "target") {
      if (!(ls >> target_text)) throw bad("expected 'target <type>'");
    } else if (key == "word") {
      Pending p;
      p.line = lineno;
      if (!(ls >> p.surface >> p.type >> p.tag >> p.kind >> p.file)) {
        throw bad("expected 'word <surface> <type> <tag> <pure|density> <file|->'");
      }
      if (p.kind != "pure" && p.kind != "density") throw bad("meaning kind must be pure or density");
      pending.push_back(std::move(p));
    } else {
      throw bad("unknown directive '" + key + "'");
    }
  }
  if (dims.empty()) throw ParseError("lexicon declares no spaces");

  Lexicon lex;
  std::set<std::string> basic;
  for (const auto& [b, d] : dims) basic.insert(b);
  lex.grammar = pregroup::Grammar(basic);
  lex.spaces = SpaceAssignment(dims, unified);
  lex.target = pregroup::parse_type(target_text, lex.grammar);
  for (const auto& p : pending) {
    WordState<RealField> w;
    w.surface = p.surface;
    w.type = pregroup::parse_type(p.type, lex.grammar);
    w.tag = parse_tag(p.tag);
    w.density = p.kind == "density";
    if (p.file != "-") {
      w.meaning = io::load_any(base_dir / p.file);
    } else if (w.tag != Tag::RelPronoun) {
      throw ParseError("lexicon line " + std::to_string(p.line) + ": word '" + p.surface + "' needs a meaning file");
    }
    prepare(w, lex.spaces);  // shape check
    if (!lex.entries.emplace(w.surface, w).second) {
      throw ParseError("lexicon line " + std::to_string(p.line) + ": duplicate word '" + p.surface + "'");
    }
  }
  return lex;
}

const WordState<RealField>& Lexicon::lookup(const std::string& surface) const {
  const auto it = entries.find(surface);
  if (it == entries.end()) throw DataError("word '" + surface + "' is not in the lexicon");
  return it->second;
}

std::vector<WordState<RealField>> Lexicon::resolve(const std::vector<std::string>& tokens) const {
  std::vector<WordState<RealField>> out;
  for (const auto& t : tokens) out.push_back(lookup(t));
  return out;
}

std::vector<std::string> tokenize(const std::string& sentence) {
  std::istringstream is(sentence);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  if (out.empty()) throw DataError("empty sentence");
  return out;
}

SentenceMeaning evaluate(const Lexicon& lex, const std::vector<std::string>& tokens, Mode mode,
                         const std::optional<PregroupType>& target, const std::vector<std::size_t>& noncomm_plan) {
  const auto words = lex.resolve(tokens);
  SentenceMeaning out;
  if (mode == Mode::Noncommutative) {
    if (noncomm_plan.empty()) throw DataError("the non-commutative mode needs an explicit plan");
    std::vector<RealTensor> ops;
    for (const auto& w : words) ops.push_back(operator_of(w));
    out.matrix = compose_noncomm(ops, noncomm_plan);
    std::ostringstream tr;
    for (std::size_t k = 0; k < noncomm_plan.size(); ++k) {
      tr << (k ? "mu_D  " : "start ") << noncomm_plan[k] << ":" << tokens.at(noncomm_plan[k]) << '\n';
    }
    out.trace = tr.str();
    return out;
  }

  std::vector<PregroupType> types;
  for (const auto& w : words) types.push_back(w.type);
  const Plan plan = make_plan(types, target ? *target : lex.target);
  out.trace = plan_trace(plan, tokens);

  switch (mode) {
    case Mode::Pure: {
      const RealTensor v = compose_pure(words, plan, lex.spaces);
      const RealTensor flat = v.reshaped(Shape{v.size()});
      out.matrix = linalg::outer(flat, flat);
      break;
    }
    case Mode::Density:
      out.matrix = cpm::PositiveOperator::from_matrix(compose_density_matrix(words, plan, lex.spaces)).matrix();
      break;
    case Mode::DensityFrobenius: {
      if (!lex.spaces.is_unified()) throw DataError("density-frobenius mode needs a unified space assignment");
      if (auto m = closed_form(words)) {
        out.matrix = std::move(*m);
        out.closed_form = true;
      } else {
        out.matrix = cpm::PositiveOperator::from_matrix(compose_density_matrix(words, plan, lex.spaces)).matrix();
      }
      break;
    }
    case Mode::Noncommutative:
      break;
  }
  return out;
}

}  // namespace mixsem::composition
