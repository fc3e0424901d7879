#pragma once

#include <string>
#include <vector>

#include "fmlab/signature.hpp"

namespace fmlab {

enum class FormulaKind { atom, eq, neg, conj, disj, implies, iff, forall, exists };

/// First-order formula over a relational vocabulary. Atoms apply a relation
/// symbol to variables; there are no function terms. Quantifier nodes carry the
/// bound variable name and an optional sort annotation.
struct Formula {
    FormulaKind kind = FormulaKind::atom;
    std::string symbol;              // atom: relation name; quantifier: variable
    std::string sort;                // quantifier: sort annotation, "" = inferred
    std::vector<std::string> args;   // atom arguments / the two equality sides
    std::vector<Formula> children;

    static Formula atom(std::string rel, std::vector<std::string> vars);
    static Formula eq(std::string a, std::string b);
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula forall(std::string var, Formula body, std::string sort = "");
    static Formula exists(std::string var, Formula body, std::string sort = "");
};

/// Parses one formula. Grammar, loosest to tightest:
///   formula := quantified | iff-chain; "forall x." / "exists x: sort." bind to
///   the end of the enclosing scope; `<->`, `->` (right assoc), `|`, `&`, `!`.
///   Atoms are `R(x, y; z)` (`,` and `;` both separate arguments) or `x = y`.
///   `#` starts a line comment. Throws parse_error with a 1-based position.
Formula parse_formula(const std::string& text);

/// Round-trippable rendering with minimal parentheses.
std::string format_formula(const Formula& f);

struct NamedFormula {
    std::string name;
    Formula formula;
};

/// Axiom-suite files: one named sentence per stanza,
///   [name]
///   forall x. ...
/// Blank lines and `#` comments are skipped.
std::vector<NamedFormula> parse_axiom_suite(const std::string& text);

/// Free variables with inferred sorts, in first-occurrence order. Checks
/// well-sortedness against the signature (arity, coordinate sorts, equality
/// sides agreeing); unconstrained variables default to sort 0.
std::vector<std::pair<std::string, int>> free_variables(const Formula& f,
                                                        const Signature& sig);

} // namespace fmlab
