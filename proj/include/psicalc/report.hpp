#pragma once

#include "psicalc/congruence.hpp"

#include <json.hpp>

#include <ostream>
#include <sstream>
#include <string>

namespace psicalc {

// Record streams are byte-deterministic: fixed field order, decimal
// sums, "inf" for the valuation of an exactly-zero sum.

inline constexpr const char* kCsvHeader = "p,a,n,r,j,sum,valuation,bound,bound_kind,tight";

inline void emit_csv_row(std::ostream& os, const CongruenceRecord& rec) {
    os << rec.p << ',' << rec.a << ',' << rec.n << ',' << rec.r << ',' << rec.j << ','
       << rec.sum << ',' << rec.valuation.to_string() << ',' << rec.bound << ','
       << to_string(rec.bound_kind) << ',' << (rec.tight ? "true" : "false") << '\n';
}

inline void emit_csv(std::ostream& os, const std::vector<CongruenceRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& rec : records) {
        emit_csv_row(os, rec);
    }
}

inline void emit_json_record(std::ostream& os, const CongruenceRecord& rec) {
    os << "{\"p\":" << rec.p << ",\"a\":" << rec.a << ",\"n\":" << rec.n
       << ",\"r\":" << rec.r << ",\"j\":" << rec.j << ",\"sum\":\"" << rec.sum
       << "\",\"valuation\":";
    if (rec.valuation.is_infinite()) {
        os << "\"inf\"";
    } else {
        os << rec.valuation.known();
    }
    os << ",\"bound\":" << rec.bound << ",\"bound_kind\":\"" << to_string(rec.bound_kind)
       << "\",\"tight\":" << (rec.tight ? "true" : "false") << "}";
}

inline void emit_json(std::ostream& os, const std::vector<CongruenceRecord>& records) {
    os << "[";
    for (size_t i = 0; i < records.size(); ++i) {
        os << (i == 0 ? "\n  " : ",\n  ");
        emit_json_record(os, records[i]);
    }
    os << (records.empty() ? "]" : "\n]") << '\n';
}

inline std::vector<CongruenceRecord> parse_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.is_array()) {
        throw std::invalid_argument("parse_json: expected an array of records");
    }
    std::vector<CongruenceRecord> records;
    records.reserve(doc.size());
    for (const auto& item : doc) {
        CongruenceRecord rec;
        rec.p = item.at("p").get<long long>();
        rec.a = item.at("a").get<long long>();
        rec.n = item.at("n").get<long long>();
        rec.r = item.at("r").get<long long>();
        rec.j = item.at("j").get<long long>();
        rec.sum = BigInt(item.at("sum").get<std::string>());
        const auto& val = item.at("valuation");
        if (val.is_string()) {
            const std::string s = val.get<std::string>();
            if (s == "inf") {
                rec.valuation = Valuation::infinity();
            } else if (s.rfind(">=", 0) == 0) {
                rec.valuation = Valuation::at_least(std::stoll(s.substr(2)));
            } else {
                rec.valuation = Valuation::finite(std::stoll(s));
            }
        } else {
            rec.valuation = Valuation::finite(val.get<long long>());
        }
        rec.bound = item.at("bound").get<long long>();
        rec.bound_kind = bound_kind_from_string(item.at("bound_kind").get<std::string>());
        rec.tight = item.at("tight").get<bool>();
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::string to_text_line(const CongruenceRecord& rec) {
    std::ostringstream os;
    os << "p=" << rec.p << " a=" << rec.a << " n=" << rec.n << " r=" << rec.r
       << " j=" << rec.j << " sum=" << rec.sum << " valuation=" << rec.valuation.to_string()
       << " bound=" << rec.bound << " kind=" << to_string(rec.bound_kind)
       << (rec.tight ? " tight" : "") << (rec.passes() ? "" : " FAIL");
    return os.str();
}

}  // namespace psicalc
