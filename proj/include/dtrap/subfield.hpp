#pragma once

#include <map>
#include <string>
#include <vector>

#include "dtrap/independence.hpp"

namespace dtrap {

/// A field of the tower: its own free presentation and the images of its
/// generators in the ambient presentation.
struct SubfieldDecl {
  std::string name;
  DiffPresentation own;
  std::map<Symbol, Rational> embedding;

  Rational embed(const Rational& f) const { return substitute(f, embedding); }

  std::vector<Rational> embedded_generators() const {
    std::vector<Rational> out;
    for (Symbol v : own.vars()) out.push_back(embedding.at(v));
    return out;
  }
};

/// The ambient presentation viewed as a subfield of itself.
inline SubfieldDecl identity_subfield(const DiffPresentation& ambient) {
  SubfieldDecl d{ambient.name(), ambient, {}};
  for (Symbol v : ambient.vars()) d.embedding.emplace(v, ambient.element(v));
  return d;
}

/// Compatibility with the derivations on every generator whose own image is
/// defined, then algebraic independence of the embedded generators. FALSE
/// carries the failing check's witness; independence that is only bounded by
/// the oracle comes back INCONCLUSIVE.
inline Verdict check_embedding(const SubfieldDecl& sub, const DiffPresentation& ambient, const EngineConfig& cfg = {}) {
  if (sub.own.p() != ambient.p()) return Verdict::no(sub.name + " and " + ambient.name() + " have different characteristic");
  if (sub.own.m() != ambient.m()) return Verdict::no(sub.name + " and " + ambient.name() + " have different numbers of derivations");
  Verdict out = Verdict::yes("embedding of " + sub.name + " is compatible and its generators are independent");
  for (Symbol u : sub.own.vars()) {
    auto it = sub.embedding.find(u);
    if (it == sub.embedding.end()) throw Error(ErrorCode::Precondition, sub.name + ": no embedding given for " + u.name());
    for (Symbol s : it->second.variables())
      if (!ambient.has_var(s)) throw Error(ErrorCode::UnknownVariable, s.name() + " is not a generator of " + ambient.name());
  }
  for (Symbol u : sub.own.vars())
    for (int i = 0; i < ambient.m(); ++i) {
      const Image& img = sub.own.image(i, u);
      if (!img) {
        out.notes.push_back("d" + std::to_string(i + 1) + " " + u.name() + " is opaque in " + sub.name + "; not compared");
        continue;
      }
      Rational expected = sub.embed(*img);
      Rational actual = derive(sub.embedding.at(u), i, ambient);
      if (!(expected == actual)) {
        Verdict no = Verdict::no("embedding of " + sub.name + " does not respect d" + std::to_string(i + 1) + " on " + u.name());
        no.witnesses.push_back(DerivationMismatch{u.name(), i, expected, actual});
        return no;
      }
    }
  TrdegOptions opt;
  opt.degree = cfg.oracle_degree;
  for (Symbol u : sub.own.vars()) opt.names.push_back(u.name());
  auto t = trdeg(sub.embedded_generators(), {}, ambient, cfg, opt);
  if (t.verdict.is_false()) {
    Verdict no = Verdict::no("embedded generators of " + sub.name + " are algebraically dependent");
    no.witnesses = t.verdict.witnesses;
    return no;
  }
  if (!t.verdict.is_true()) {
    Verdict v = Verdict::unknown(t.verdict.bound, "embedding of " + sub.name + " is compatible; independence of its generators is " +
                                                      t.verdict.label());
    v.notes = out.notes;
    return v;
  }
  out.witnesses = t.verdict.witnesses;
  return out;
}

}  // namespace dtrap
