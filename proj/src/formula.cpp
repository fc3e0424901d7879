#include "fmlab/formula.hpp"

#include <map>
#include <optional>

#include "fmlab/errors.hpp"

namespace fmlab {

Formula Formula::atom(std::string rel, std::vector<std::string> vars) {
    Formula f;
    f.kind = FormulaKind::atom;
    f.symbol = std::move(rel);
    f.args = std::move(vars);
    return f;
}

Formula Formula::eq(std::string a, std::string b) {
    Formula f;
    f.kind = FormulaKind::eq;
    f.args = {std::move(a), std::move(b)};
    return f;
}

Formula Formula::neg(Formula x) {
    Formula f;
    f.kind = FormulaKind::neg;
    f.children.push_back(std::move(x));
    return f;
}

namespace {
Formula binary(FormulaKind kind, Formula a, Formula b) {
    Formula f;
    f.kind = kind;
    f.children.push_back(std::move(a));
    f.children.push_back(std::move(b));
    return f;
}
Formula quantifier(FormulaKind kind, std::string var, Formula body, std::string sort) {
    Formula f;
    f.kind = kind;
    f.symbol = std::move(var);
    f.sort = std::move(sort);
    f.children.push_back(std::move(body));
    return f;
}
} // namespace

Formula Formula::conj(Formula a, Formula b) { return binary(FormulaKind::conj, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(FormulaKind::disj, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return binary(FormulaKind::implies, std::move(a), std::move(b)); }
Formula Formula::iff(Formula a, Formula b) { return binary(FormulaKind::iff, std::move(a), std::move(b)); }
Formula Formula::forall(std::string var, Formula body, std::string sort) {
    return quantifier(FormulaKind::forall, std::move(var), std::move(body), std::move(sort));
}
Formula Formula::exists(std::string var, Formula body, std::string sort) {
    return quantifier(FormulaKind::exists, std::move(var), std::move(body), std::move(sort));
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok {
    ident, lparen, rparen, comma, dot, eq, bang, amp, pipe, arrow, darrow,
    colon, kw_forall, kw_exists, end
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1;
    int column = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    void advance(size_t k) {
        for (size_t i = 0; i < k && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    }

    static bool ident_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9') || c == '_' || c == '\'';
    }

    Token next() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
                continue;
            }
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') advance(1);
                continue;
            }
            break;
        }
        int l = line, col = column;
        if (pos >= src.size()) return {Tok::end, "", l, col};
        char c = src[pos];
        auto tok = [&](Tok k, size_t width) {
            std::string text = src.substr(pos, width);
            advance(width);
            return Token{k, text, l, col};
        };
        if (src.compare(pos, 3, "<->") == 0) return tok(Tok::darrow, 3);
        if (src.compare(pos, 2, "->") == 0) return tok(Tok::arrow, 2);
        switch (c) {
            case '(': return tok(Tok::lparen, 1);
            case ')': return tok(Tok::rparen, 1);
            case ',': case ';': return tok(Tok::comma, 1);
            case '.': return tok(Tok::dot, 1);
            case '=': return tok(Tok::eq, 1);
            case '!': return tok(Tok::bang, 1);
            case '&': return tok(Tok::amp, 1);
            case '|': return tok(Tok::pipe, 1);
            case ':': return tok(Tok::colon, 1);
            case '<': case '>': case '~': return tok(Tok::ident, 1);
            default: break;
        }
        if (ident_char(c) && !(c >= '0' && c <= '9')) {
            size_t end = pos;
            while (end < src.size() && ident_char(src[end])) ++end;
            Token t = tok(Tok::ident, end - pos);
            if (t.text == "forall") t.kind = Tok::kw_forall;
            if (t.text == "exists") t.kind = Tok::kw_exists;
            return t;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", l, col);
    }
};

struct Parser {
    std::vector<Token> tokens;
    size_t at = 0;

    explicit Parser(const std::string& text) {
        Lexer lex(text);
        while (true) {
            Token t = lex.next();
            tokens.push_back(t);
            if (t.kind == Tok::end) break;
        }
    }

    const Token& peek() const { return tokens[at]; }
    Token take() { return tokens[at++]; }

    Token expect(Tok kind, const std::string& what) {
        if (peek().kind != kind)
            throw parse_error("expected " + what + (peek().kind == Tok::end
                                                        ? " before end of input"
                                                        : ", found '" + peek().text + "'"),
                              peek().line, peek().column);
        return take();
    }

    Formula parse() {
        Formula f = formula();
        if (peek().kind != Tok::end)
            throw parse_error("trailing input after formula: '" + peek().text + "'",
                              peek().line, peek().column);
        return f;
    }

    Formula formula() { return quantified(); }

    Formula quantified() {
        if (peek().kind == Tok::kw_forall || peek().kind == Tok::kw_exists) {
            bool uni = take().kind == Tok::kw_forall;
            Token var = expect(Tok::ident, "a variable after the quantifier");
            std::string sort;
            if (peek().kind == Tok::colon) {
                take();
                sort = expect(Tok::ident, "a sort name after ':'").text;
            }
            expect(Tok::dot, "'.' after the quantified variable");
            Formula body = quantified();
            return uni ? Formula::forall(var.text, std::move(body), sort)
                       : Formula::exists(var.text, std::move(body), sort);
        }
        return iff_chain();
    }

    Formula iff_chain() {
        Formula left = imp_chain();
        if (peek().kind == Tok::darrow) {
            take();
            return Formula::iff(std::move(left), iff_chain());
        }
        return left;
    }

    Formula imp_chain() {
        Formula left = or_chain();
        if (peek().kind == Tok::arrow) {
            take();
            return Formula::implies(std::move(left), imp_chain());
        }
        return left;
    }

    Formula or_chain() {
        Formula left = and_chain();
        while (peek().kind == Tok::pipe) {
            take();
            left = Formula::disj(std::move(left), and_chain());
        }
        return left;
    }

    Formula and_chain() {
        Formula left = unary();
        while (peek().kind == Tok::amp) {
            take();
            left = Formula::conj(std::move(left), unary());
        }
        return left;
    }

    Formula unary() {
        if (peek().kind == Tok::bang) {
            take();
            return Formula::neg(unary());
        }
        if (peek().kind == Tok::lparen) {
            take();
            Formula inner = quantified();
            expect(Tok::rparen, "')'");
            return inner;
        }
        if (peek().kind == Tok::kw_forall || peek().kind == Tok::kw_exists)
            return quantified();
        Token head = expect(Tok::ident, "an atom");
        if (peek().kind == Tok::lparen) {
            take();
            std::vector<std::string> args;
            args.push_back(expect(Tok::ident, "an argument variable").text);
            while (peek().kind == Tok::comma) {
                take();
                args.push_back(expect(Tok::ident, "an argument variable").text);
            }
            expect(Tok::rparen, "')' closing the argument list");
            return Formula::atom(head.text, std::move(args));
        }
        if (peek().kind == Tok::eq) {
            take();
            Token rhs = expect(Tok::ident, "a variable after '='");
            return Formula::eq(head.text, rhs.text);
        }
        throw parse_error("expected '(' or '=' after '" + head.text + "'",
                          peek().line, peek().column);
    }
};

} // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

namespace {

int precedence(FormulaKind k) {
    switch (k) {
        case FormulaKind::forall:
        case FormulaKind::exists: return 0;
        case FormulaKind::iff: return 1;
        case FormulaKind::implies: return 2;
        case FormulaKind::disj: return 3;
        case FormulaKind::conj: return 4;
        case FormulaKind::neg: return 5;
        default: return 6;
    }
}

void format_into(const Formula& f, std::string& out, int parent_prec) {
    int prec = precedence(f.kind);
    bool need_parens = prec < parent_prec;
    if (need_parens) out += "(";
    switch (f.kind) {
        case FormulaKind::atom:
            out += f.symbol + "(";
            for (size_t i = 0; i < f.args.size(); ++i) out += (i ? "," : "") + f.args[i];
            out += ")";
            break;
        case FormulaKind::eq:
            out += f.args[0] + " = " + f.args[1];
            break;
        case FormulaKind::neg:
            out += "!";
            format_into(f.children[0], out, prec + 1);
            break;
        case FormulaKind::conj:
        case FormulaKind::disj:
        case FormulaKind::implies:
        case FormulaKind::iff: {
            const char* op = f.kind == FormulaKind::conj    ? " & "
                             : f.kind == FormulaKind::disj  ? " | "
                             : f.kind == FormulaKind::implies ? " -> "
                                                             : " <-> ";
            bool right_assoc = f.kind == FormulaKind::implies || f.kind == FormulaKind::iff;
            format_into(f.children[0], out, right_assoc ? prec + 1 : prec);
            out += op;
            format_into(f.children[1], out, right_assoc ? prec : prec + 1);
            break;
        }
        case FormulaKind::forall:
        case FormulaKind::exists:
            out += (f.kind == FormulaKind::forall ? "forall " : "exists ") + f.symbol;
            if (!f.sort.empty()) out += ": " + f.sort;
            out += ". ";
            format_into(f.children[0], out, prec);
            break;
    }
    if (need_parens) out += ")";
}

} // namespace

std::string format_formula(const Formula& f) {
    std::string out;
    format_into(f, out, 0);
    return out;
}

std::vector<NamedFormula> parse_axiom_suite(const std::string& text) {
    std::vector<NamedFormula> out;
    std::string name;
    std::string body;
    int stanza_line = 1;
    auto flush = [&](int end_line) {
        if (name.empty()) {
            // Content before the first stanza header must be blank.
            for (char c : body)
                if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
                    throw parse_error("axiom suite text before the first [name] header", 1, 1);
            body.clear();
            return;
        }
        try {
            out.push_back({name, parse_formula(body)});
        } catch (const parse_error& e) {
            throw parse_error("in stanza [" + name + "]: " + e.what(), stanza_line, 1);
        }
        (void)end_line;
        body.clear();
    };
    int line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string line = text.substr(start, end == std::string::npos ? end : end - start);
        ++line_no;
        std::string trimmed = line;
        size_t a = trimmed.find_first_not_of(" \t\r");
        if (a == std::string::npos) trimmed.clear();
        else trimmed = trimmed.substr(a, trimmed.find_last_not_of(" \t\r") - a + 1);
        if (!trimmed.empty() && trimmed.front() == '#') {
            // whole-line comment
        } else if (!trimmed.empty() && trimmed.front() == '[' && trimmed.back() == ']') {
            flush(line_no - 1);
            name = trimmed.substr(1, trimmed.size() - 2);
            stanza_line = line_no;
            if (name.empty()) throw parse_error("empty stanza name", line_no, 1);
        } else {
            body += line + "\n";
        }
        if (end == std::string::npos) break;
        start = end + 1;
    }
    flush(line_no);
    return out;
}

// ---------------------------------------------------------------------------
// Sort checking

namespace {

struct SortScope {
    const Signature& sig;
    std::map<std::string, int> sorts;        // variable -> sort, -1 unknown
    std::vector<std::string> order;          // first occurrence order
    std::vector<std::pair<std::string, std::string>> pending_eq;

    explicit SortScope(const Signature& s) : sig(s) {}

    void see(const std::string& var) {
        if (!sorts.count(var)) {
            sorts[var] = -1;
            order.push_back(var);
        }
    }

    void constrain(const std::string& var, int sort, const std::string& where) {
        see(var);
        int& slot = sorts[var];
        if (slot == -1) slot = sort;
        else if (slot != sort)
            throw input_error("variable " + var + " used at two sorts in " + where);
    }
};

void walk_sorts(const Formula& f, SortScope& scope,
                std::vector<std::string>& bound) {
    switch (f.kind) {
        case FormulaKind::atom: {
            int r = scope.sig.relation_index_opt(f.symbol);
            if (r < 0) throw input_error("unknown relation symbol in formula: " + f.symbol);
            const auto& sym = scope.sig.relations()[static_cast<size_t>(r)];
            if (static_cast<int>(f.args.size()) != sym.arity)
                throw input_error("relation " + f.symbol + " expects " +
                                  std::to_string(sym.arity) + " arguments");
            for (size_t i = 0; i < f.args.size(); ++i)
                scope.constrain(f.args[i], sym.sorts[i], f.symbol + " atom");
            break;
        }
        case FormulaKind::eq:
            scope.see(f.args[0]);
            scope.see(f.args[1]);
            scope.pending_eq.emplace_back(f.args[0], f.args[1]);
            break;
        case FormulaKind::forall:
        case FormulaKind::exists: {
            for (const auto& b : bound)
                if (b == f.symbol)
                    throw input_error("variable " + f.symbol +
                                      " is bound twice along one path");
            scope.see(f.symbol);
            if (!f.sort.empty())
                scope.constrain(f.symbol, scope.sig.sort_index(f.sort), "quantifier");
            bound.push_back(f.symbol);
            walk_sorts(f.children[0], scope, bound);
            bound.pop_back();
            break;
        }
        default:
            for (const auto& c : f.children) walk_sorts(c, scope, bound);
    }
}

void collect_bound(const Formula& f, std::vector<std::string>& names) {
    if (f.kind == FormulaKind::forall || f.kind == FormulaKind::exists)
        names.push_back(f.symbol);
    for (const auto& c : f.children) collect_bound(c, names);
}

} // namespace

std::vector<std::pair<std::string, int>> free_variables(const Formula& f,
                                                        const Signature& sig) {
    SortScope scope(sig);
    std::vector<std::string> bound;
    walk_sorts(f, scope, bound);
    // Propagate equality constraints to a fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : scope.pending_eq) {
            int sa = scope.sorts[a], sb = scope.sorts[b];
            if (sa == -1 && sb != -1) { scope.sorts[a] = sb; changed = true; }
            else if (sb == -1 && sa != -1) { scope.sorts[b] = sa; changed = true; }
            else if (sa != -1 && sb != -1 && sa != sb)
                throw input_error("equality " + a + " = " + b + " mixes sorts");
        }
    }
    std::vector<std::string> bound_names;
    collect_bound(f, bound_names);
    std::vector<std::pair<std::string, int>> out;
    for (const auto& var : scope.order) {
        bool is_bound = false;
        for (const auto& b : bound_names)
            if (b == var) { is_bound = true; break; }
        if (is_bound) continue;
        int s = scope.sorts[var];
        out.emplace_back(var, s == -1 ? 0 : s);
    }
    return out;
}

} // namespace fmlab
