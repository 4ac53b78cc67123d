#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace qwr {

/// Verdict record for a single inequality check. For <=-type bounds the
/// slack is rhs - lhs; satisfied means slack >= -tol * scale with the
/// tolerance and scale recorded in context.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool satisfied = false;
    std::map<std::string, double> context;

    nlohmann::json to_json() const {
        nlohmann::json j{{"name", name}, {"lhs", lhs},   {"rhs", rhs},
                         {"slack", slack}, {"satisfied", satisfied}};
        j["context"] = context;
        return j;
    }
};

/// Builds a <=-type report: satisfied iff lhs <= rhs + tol * scale.
inline BoundReport make_leq_report(std::string name, double lhs, double rhs,
                                   double tol, double scale) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.satisfied = r.slack >= -tol * scale;
    r.context["tol"] = tol;
    r.context["scale"] = scale;
    return r;
}

}  // namespace qwr
