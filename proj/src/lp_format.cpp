#include "sbrp/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sbrp/errors.hpp"

namespace sbrp::lp {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void append_terms(std::string& out, const std::vector<Term>& terms) {
    bool first = true;
    std::size_t line_len = out.size() - out.rfind('\n');
    for (const Term& t : terms) {
        std::string piece;
        if (first) {
            piece = (t.coef < 0 ? "- " : "") + num(std::abs(t.coef)) + " " + t.var;
            first = false;
        } else {
            piece = std::string(t.coef < 0 ? "- " : "+ ") + num(std::abs(t.coef)) + " " + t.var;
        }
        if (line_len + piece.size() + 1 > 200) {
            out += "\n     ";
            line_len = 6;
        } else {
            out += ' ';
            ++line_len;
        }
        out += piece;
        line_len += piece.size();
    }
}

bool is_number_token(const std::string& t) {
    if (t.empty()) return false;
    char c = t[0];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
    if ((c == '+' || c == '-') && t.size() > 1 &&
        (std::isdigit(static_cast<unsigned char>(t[1])) || t[1] == '.'))
        return true;
    return false;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::string Model::to_string() const {
    std::string out;
    for (const auto& c : comments) out += "\\ " + c + "\n";
    out += "Minimize\n";
    out += " " + objective_name + ":";
    append_terms(out, objective);
    out += "\nSubject To\n";
    for (const auto& c : constraints) {
        out += " " + c.name + ":";
        append_terms(out, c.terms);
        out += c.sense == '<' ? " <= " : (c.sense == '>' ? " >= " : " = ");
        out += num(c.rhs);
        out += "\n";
    }
    if (!bounds.empty()) {
        out += "Bounds\n";
        for (const auto& b : bounds) {
            if (b.has_lo && b.has_hi)
                out += " " + num(b.lo) + " <= " + b.var + " <= " + num(b.hi) + "\n";
            else if (b.has_hi)
                out += " " + b.var + " <= " + num(b.hi) + "\n";
            else if (b.has_lo)
                out += " " + b.var + " >= " + num(b.lo) + "\n";
            else
                out += " " + b.var + " free\n";
        }
    }
    if (!binaries.empty()) {
        out += "Binary\n";
        for (const auto& v : binaries) out += " " + v + "\n";
    }
    if (!generals.empty()) {
        out += "General\n";
        for (const auto& v : generals) out += " " + v + "\n";
    }
    out += "End\n";
    return out;
}

namespace {

struct Tokenizer {
    std::vector<std::string> tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const { return tokens[pos]; }
    std::string take() { return tokens[pos++]; }
};

// Terms run until a sense token or the stream ends.
std::vector<Term> parse_terms(Tokenizer& tk) {
    std::vector<Term> terms;
    double sign = 1.0;
    bool have_sign = false;
    double coef = 1.0;
    bool have_coef = false;
    while (!tk.done()) {
        const std::string& t = tk.peek();
        if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") break;
        if (t == "+" || t == "-") {
            if (have_sign || have_coef) fail("ParseError", "dangling sign in LP expression");
            sign = (t == "-") ? -1.0 : 1.0;
            have_sign = true;
            tk.take();
            continue;
        }
        if (is_number_token(t)) {
            if (have_coef) fail("ParseError", "two consecutive numbers in LP expression");
            coef = std::stod(tk.take());
            have_coef = true;
            continue;
        }
        terms.push_back(Term{sign * coef, tk.take()});
        sign = 1.0;
        coef = 1.0;
        have_sign = have_coef = false;
    }
    if (have_sign || have_coef) fail("ParseError", "LP expression ends inside a term");
    return terms;
}

}  // namespace

Model parse(const std::string& text) {
    Model model;
    model.objective_name.clear();

    enum class Section { none, objective, constraints, bounds, binary, general, end };
    Section section = Section::none;

    std::istringstream in(text);
    std::string line;
    bool pending_subject = false;  // saw "subject", waiting for "to"
    std::vector<std::string> expr_tokens;

    auto flush_constraint = [&](std::vector<std::string>& toks) {
        if (toks.empty()) return;
        Tokenizer tk;
        tk.tokens = std::move(toks);
        toks = {};
        std::string name;
        if (!tk.done()) {
            std::string first = tk.peek();
            if (!first.empty() && first.back() == ':') {
                name = first.substr(0, first.size() - 1);
                tk.take();
            } else if (tk.tokens.size() > 1 && tk.tokens[1] == ":") {
                name = tk.take();
                tk.take();
            }
        }
        std::vector<Term> terms = parse_terms(tk);
        if (tk.done()) fail("ParseError", "constraint \"" + name + "\" missing comparison");
        const std::string senset = tk.take();
        char sense = senset[0] == '<' ? '<' : (senset[0] == '>' ? '>' : '=');
        if (tk.done()) fail("ParseError", "constraint \"" + name + "\" missing right-hand side");
        const double rhs = std::stod(tk.take());
        if (!tk.done()) fail("ParseError", "trailing tokens after constraint \"" + name + "\"");
        model.constraints.push_back(Constraint{name, std::move(terms), sense, rhs});
    };

    auto flush_objective = [&](std::vector<std::string>& toks) {
        if (toks.empty()) return;
        Tokenizer tk;
        tk.tokens = std::move(toks);
        toks = {};
        if (!tk.done()) {
            std::string first = tk.peek();
            if (!first.empty() && first.back() == ':') {
                model.objective_name = first.substr(0, first.size() - 1);
                tk.take();
            }
        }
        model.objective = parse_terms(tk);
        if (!tk.done()) fail("ParseError", "trailing tokens in objective");
    };

    auto handle_bound_line = [&](const std::vector<std::string>& toks) {
        Bound b;
        if (toks.size() == 2 && lower(toks[1]) == "free") {
            b.var = toks[0];
        } else if (toks.size() == 3 && (toks[1] == "<=" || toks[1] == "<")) {
            b.var = toks[0];
            b.hi = std::stod(toks[2]);
            b.has_hi = true;
        } else if (toks.size() == 3 && (toks[1] == ">=" || toks[1] == ">")) {
            b.var = toks[0];
            b.lo = std::stod(toks[2]);
            b.has_lo = true;
        } else if (toks.size() == 3 && toks[1] == "=") {
            b.var = toks[0];
            b.lo = b.hi = std::stod(toks[2]);
            b.has_lo = b.has_hi = true;
        } else if (toks.size() == 5 && (toks[1] == "<=" || toks[1] == "<") &&
                   (toks[3] == "<=" || toks[3] == "<")) {
            b.var = toks[2];
            b.lo = std::stod(toks[0]);
            b.hi = std::stod(toks[4]);
            b.has_lo = b.has_hi = true;
        } else {
            fail("ParseError", "unrecognized bounds line in LP file");
        }
        model.bounds.push_back(b);
    };

    while (std::getline(in, line)) {
        // comment handling: leading-backslash lines are collected verbatim
        const auto bs = line.find('\\');
        std::string content = bs == std::string::npos ? line : line.substr(0, bs);
        if (bs != std::string::npos) {
            std::string comment = line.substr(bs + 1);
            if (!comment.empty() && comment[0] == ' ') comment.erase(0, 1);
            if (content.find_first_not_of(" \t\r") == std::string::npos)
                model.comments.push_back(comment);
        }

        std::istringstream ls(content);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (toks.empty()) continue;

        std::string head = lower(toks[0]);
        if (pending_subject) {
            pending_subject = false;
            if (head == "to") {
                section = Section::constraints;
                toks.erase(toks.begin());
                if (toks.empty()) continue;
                head = lower(toks[0]);
            }
        }

        bool switched = true;
        if (toks.size() == 1 && (head == "minimize" || head == "min")) {
            flush_objective(expr_tokens);
            section = Section::objective;
        } else if (head == "subject" && toks.size() == 1) {
            flush_objective(expr_tokens);
            flush_constraint(expr_tokens);
            pending_subject = true;
        } else if (toks.size() == 2 && head == "subject" && lower(toks[1]) == "to") {
            flush_objective(expr_tokens);
            flush_constraint(expr_tokens);
            section = Section::constraints;
        } else if (toks.size() == 1 && (head == "st" || head == "s.t.")) {
            flush_objective(expr_tokens);
            section = Section::constraints;
        } else if (toks.size() == 1 && head == "bounds") {
            flush_constraint(expr_tokens);
            section = Section::bounds;
        } else if (toks.size() == 1 && (head == "binary" || head == "binaries" || head == "bin")) {
            flush_constraint(expr_tokens);
            section = Section::binary;
        } else if (toks.size() == 1 && (head == "general" || head == "generals" || head == "gen")) {
            flush_constraint(expr_tokens);
            section = Section::general;
        } else if (toks.size() == 1 && head == "end") {
            flush_constraint(expr_tokens);
            section = Section::end;
        } else {
            switched = false;
        }
        if (switched) continue;

        switch (section) {
            case Section::objective:
                for (auto& t : toks) expr_tokens.push_back(std::move(t));
                break;
            case Section::constraints: {
                // a new named constraint flushes the previous one
                if (!expr_tokens.empty() && !toks.empty() && toks[0].size() > 1 &&
                    toks[0].back() == ':')
                    flush_constraint(expr_tokens);
                for (auto& t : toks) expr_tokens.push_back(std::move(t));
                // flush once a full sense+rhs is present at the tail
                if (expr_tokens.size() >= 2) {
                    const std::string& tail = expr_tokens[expr_tokens.size() - 2];
                    if (tail == "<=" || tail == ">=" || tail == "=" || tail == "<" || tail == ">")
                        flush_constraint(expr_tokens);
                }
                break;
            }
            case Section::bounds:
                handle_bound_line(toks);
                break;
            case Section::binary:
                for (const auto& t : toks) model.binaries.push_back(t);
                break;
            case Section::general:
                for (const auto& t : toks) model.generals.push_back(t);
                break;
            default:
                fail("ParseError", "content outside any LP section: \"" + line + "\"");
        }
    }
    flush_constraint(expr_tokens);
    if (section != Section::end) fail("ParseError", "LP file missing End marker");
    return model;
}

double eval_terms(const std::vector<Term>& terms, const std::map<std::string, double>& values) {
    double lhs = 0.0;
    for (const Term& t : terms) {
        auto it = values.find(t.var);
        lhs += t.coef * (it == values.end() ? 0.0 : it->second);
    }
    return lhs;
}

std::vector<Violation> check_solution(const Model& model,
                                      const std::map<std::string, double>& values, double tol) {
    std::vector<Violation> out;
    for (const auto& c : model.constraints) {
        const double lhs = eval_terms(c.terms, values);
        bool ok = true;
        if (c.sense == '<') ok = lhs <= c.rhs + tol;
        else if (c.sense == '>') ok = lhs >= c.rhs - tol;
        else ok = std::abs(lhs - c.rhs) <= tol;
        if (!ok) out.push_back(Violation{c.name, lhs, c.sense, c.rhs});
    }
    for (const auto& b : model.bounds) {
        auto it = values.find(b.var);
        const double v = it == values.end() ? 0.0 : it->second;
        if (b.has_lo && v < b.lo - tol) out.push_back(Violation{"bound:" + b.var, v, '>', b.lo});
        if (b.has_hi && v > b.hi + tol) out.push_back(Violation{"bound:" + b.var, v, '<', b.hi});
    }
    for (const auto& var : model.binaries) {
        auto it = values.find(var);
        const double v = it == values.end() ? 0.0 : it->second;
        if (std::abs(v) > tol && std::abs(v - 1.0) > tol)
            out.push_back(Violation{"binary:" + var, v, '=', v < 0.5 ? 0.0 : 1.0});
    }
    return out;
}

}  // namespace sbrp::lp
