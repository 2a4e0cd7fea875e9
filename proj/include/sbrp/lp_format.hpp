#pragma once

#include <map>
#include <string>
#include <vector>

namespace sbrp::lp {

struct Term {
    double coef = 0.0;
    std::string var;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    char sense = '<';  // '<' means <=, '>' means >=, '=' equality
    double rhs = 0.0;
};

struct Bound {
    std::string var;
    double lo = 0.0;
    double hi = 0.0;
    bool has_lo = false;
    bool has_hi = false;
};

struct Model {
    std::vector<std::string> comments;  // header lines, emitted as "\ ..."
    std::string objective_name = "obj";
    std::vector<Term> objective;
    std::vector<Constraint> constraints;
    std::vector<Bound> bounds;
    std::vector<std::string> binaries;
    std::vector<std::string> generals;

    std::string to_string() const;
};

/// Parses the subset of CPLEX LP format this artifact writes (Minimize /
/// Subject To / Bounds / Binary / General / End). Throws ParseError with the
/// offending line on malformed input.
Model parse(const std::string& text);

double eval_terms(const std::vector<Term>& terms, const std::map<std::string, double>& values);

struct Violation {
    std::string constraint;
    double lhs = 0.0;
    char sense = '<';
    double rhs = 0.0;
};

/// Substitutes values (missing variables read as 0) into every constraint
/// and bound; returns the violated ones.
std::vector<Violation> check_solution(const Model& model,
                                      const std::map<std::string, double>& values,
                                      double tol = 1e-6);

}  // namespace sbrp::lp
