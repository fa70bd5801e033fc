#pragma once

#include <json.hpp>
#include <sstream>
#include <string>

#include "stj/session.hpp"

// Text and JSON rendering of output records.  All numbers are canonical
// rational strings; the ~ fields carry 15-significant-digit decimal
// approximations for human reading and are not authoritative.

namespace stj::session {

namespace detail {

inline bool looks_rational(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9'))) return false;
    return true;
}

inline std::string approx_suffix(const std::string& canonical) {
    if (!looks_rational(canonical)) return "";
    Rational r = Rational::parse(canonical);
    if (r.is_integer()) return "";
    return " (~" + to_decimal_string(r) + ")";
}

}  // namespace detail

inline std::string to_text(const OutputRecord& rec) {
    std::ostringstream os;
    os << "query: " << rec.query << "\n";
    os << "  kind: " << rec.kind << "\n";
    for (const auto& [k, v] : rec.values)
        os << "  " << k << ": " << v << detail::approx_suffix(v) << "\n";
    if (!rec.tail_error.is_zero())
        os << "  tail-error: " << rec.tail_error.str() << "\n";
    if (rec.kind == "exact" || rec.kind == "enclosure") {
        os << "  refinements: " << rec.refinements << "\n";
        if (!rec.converged) os << "  converged: false\n";
    }
    auto render_table = [&os](const Table& t) {
        os << "  columns: ";
        for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? " | " : "") << t.columns[i];
        os << " | ~" << t.columns.back() << "\n";
        for (const auto& row : t.rows) {
            os << "  ";
            for (size_t i = 0; i < row.size(); ++i) os << (i ? " | " : "") << row[i];
            std::string approx = detail::looks_rational(row.back())
                                     ? to_decimal_string(Rational::parse(row.back()))
                                     : row.back();
            os << " | " << approx << "\n";
        }
    };
    if (rec.table) render_table(*rec.table);
    if (rec.demo) {
        os << "  sampled sums:\n";
        render_table(*rec.demo);
    }
    for (const auto& n : rec.notes) os << "  note: " << n << "\n";
    return os.str();
}

inline nlohmann::ordered_json to_json(const OutputRecord& rec) {
    nlohmann::ordered_json j;
    j["query"] = rec.query;
    j["kind"] = rec.kind;
    nlohmann::ordered_json vals, approx;
    for (const auto& [k, v] : rec.values) {
        vals[k] = v;
        if (detail::looks_rational(v)) approx[k] = to_decimal_string(Rational::parse(v));
    }
    j["values"] = vals;
    if (!approx.empty()) j["approx"] = approx;  // non-authoritative decimals
    j["tail_error"] = rec.tail_error.str();
    j["refinements"] = rec.refinements;
    j["converged"] = rec.converged;
    auto table_json = [](const Table& t) {
        nlohmann::ordered_json tj;
        tj["columns"] = t.columns;
        tj["rows"] = t.rows;
        return tj;
    };
    if (rec.table) j["table"] = table_json(*rec.table);
    if (rec.demo) j["sampled_sums"] = table_json(*rec.demo);
    if (!rec.notes.empty()) j["notes"] = rec.notes;
    return j;
}

}  // namespace stj::session
