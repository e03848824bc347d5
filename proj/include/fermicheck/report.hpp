// Copyright 2026 The fermicheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fermicheck {

/// One named verdict with the numerical residual that decided it.
struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::optional<std::string> witness;
};

/// Ordered list of checks produced by one scenario.
struct Report {
    std::string scenario;
    std::vector<Check> checks;
    double tol = 0.0;
    std::uint64_t seed = 0;

    bool passed() const {
        for (const auto &c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }

    std::size_t pass_count() const {
        std::size_t n = 0;
        for (const auto &c : checks) {
            n += c.pass ? 1 : 0;
        }
        return n;
    }

    const Check *find(std::string_view name) const {
        for (const auto &c : checks) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }

    Check &add(std::string name, bool pass, double residual,
               std::optional<std::string> witness = std::nullopt) {
        checks.push_back({std::move(name), pass, residual, std::move(witness)});
        return checks.back();
    }
};

namespace json {

inline std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

/// 17 significant digits; non-finite values have no JSON literal and become null.
inline std::string number(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace json

inline std::string check_to_json(const Check &c) {
    std::string out = "{\"name\": " + json::quote(c.name) + ", \"pass\": " + (c.pass ? "true" : "false") +
                      ", \"residual\": " + json::number(c.residual);
    if (c.witness) {
        out += ", \"witness\": " + json::quote(*c.witness);
    }
    out += "}";
    return out;
}

namespace detail {

// The four schema fields of a report, one per line, without the enclosing braces.
inline std::string report_fields(const Report &r, const std::string &pad) {
    std::string out = pad + "\"scenario\": " + json::quote(r.scenario) + ",\n";
    out += pad + "\"checks\": [";
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        out += (i == 0 ? "\n" : ",\n") + pad + "  " + check_to_json(r.checks[i]);
    }
    out += r.checks.empty() ? "],\n" : "\n" + pad + "],\n";
    out += pad + "\"tol\": " + json::number(r.tol) + ",\n";
    out += pad + "\"seed\": " + std::to_string(r.seed);
    return out;
}

}  // namespace detail

/// {"scenario", "checks": [{"name", "pass", "residual", "witness"?}], "tol", "seed"}
inline std::string to_json(const Report &r, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    return pad + "{\n" + detail::report_fields(r, pad + "  ") + "\n" + pad + "}";
}

inline std::string to_text(const Report &r) {
    std::ostringstream os;
    os << r.scenario << ": " << r.pass_count() << "/" << r.checks.size() << " checks pass\n";
    for (const auto &c : r.checks) {
        os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << "  residual=" << json::number(c.residual);
        if (c.witness) {
            os << "  (" << *c.witness << ")";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace fermicheck
