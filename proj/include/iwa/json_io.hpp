#pragma once

// JSON formats.  Module files look like
//   {"p": 3, "relations": [[[1, 1, 0], [-1, 0, 1]]]}
// where each relation is a list of [coefficient, xDegree, tDegree] terms.
// Serialization uses ordered_json with 2-space indentation throughout, so a
// file written by the tool round-trips byte-identically.

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modules.hpp"
#include "text.hpp"

namespace iwa {

using ordered_json = nlohmann::ordered_json;

struct module_file {
    long p = 0;
    std::vector<std::vector<std::array<long long, 3>>> relations;
};

inline module_file module_file_from_json(const ordered_json& j) {
    module_file mf;
    if (!j.is_object() || !j.contains("p") || !j.contains("relations"))
        throw parse_error("module file needs top-level \"p\" and \"relations\"");
    if (!j["p"].is_number_integer()) throw parse_error("\"p\" must be an integer");
    mf.p = j["p"].get<long>();
    const auto& rels = j["relations"];
    if (!rels.is_array()) throw parse_error("\"relations\" must be an array");
    for (const auto& rel : rels) {
        if (!rel.is_array() || rel.empty())
            throw parse_error("each relation must be a non-empty array of terms");
        std::vector<std::array<long long, 3>> terms;
        for (const auto& t : rel) {
            if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
                !t[1].is_number_integer() || !t[2].is_number_integer())
                throw parse_error("each term must be [coefficient, xDegree, tDegree]");
            long long c = t[0].get<long long>();
            long long dx = t[1].get<long long>(), dt = t[2].get<long long>();
            if (dx < 0 || dt < 0 || dx > 4096 || dt > 4096)
                throw parse_error("term degree out of range");
            terms.push_back({c, dx, dt});
        }
        mf.relations.push_back(std::move(terms));
    }
    return mf;
}

inline module_file load_module_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open module file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("invalid JSON in " + path + ": " + e.what());
    }
    return module_file_from_json(j);
}

inline ordered_json module_file_to_json(const module_file& mf) {
    ordered_json j;
    j["p"] = mf.p;
    ordered_json rels = ordered_json::array();
    for (const auto& rel : mf.relations) {
        ordered_json r = ordered_json::array();
        for (const auto& t : rel) r.push_back({t[0], t[1], t[2]});
        rels.push_back(std::move(r));
    }
    j["relations"] = std::move(rels);
    return j;
}

inline std::string module_file_text(const module_file& mf) {
    return module_file_to_json(mf).dump(2) + "\n";
}

inline void save_module_file(const module_file& mf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write module file: " + path);
    out << module_file_text(mf);
}

inline cyclic_presentation presentation_from_file(const padic_context& ctx,
                                                  const module_file& mf) {
    if (mf.p != ctx.p()) throw context_mismatch("module file prime does not match the context");
    std::vector<bivar> rels;
    for (const auto& rel : mf.relations) {
        bivar b(ctx);
        for (const auto& t : rel)
            b.add_term(static_cast<int>(t[1]), static_cast<int>(t[2]),
                       padic_int(ctx, mpz_class(static_cast<long>(t[0]))));
        rels.push_back(std::move(b));
    }
    return cyclic_presentation(ctx, std::move(rels));
}

inline module_file to_module_file(const cyclic_presentation& m) {
    module_file mf;
    mf.p = m.context().p();
    for (const bivar& r : m.relations()) {
        std::vector<std::array<long long, 3>> terms;
        for (const auto& [k, c] : r.terms()) {
            mpz_class b = c.balanced();
            if (!b.fits_slong_p()) throw parse_error("coefficient too large for a module file");
            terms.push_back({static_cast<long long>(b.get_si()), k.first, k.second});
        }
        mf.relations.push_back(std::move(terms));
    }
    return mf;
}

inline std::string cardinality_brief(const cardinality& c, long p) {
    if (c.is_finite()) return std::to_string(p) + "^" + std::to_string(c.exponent);
    if (c.is_infinite()) return "infinite";
    return "undetermined";
}

inline ordered_json cardinality_to_json(const cardinality& c, long p) {
    ordered_json j;
    if (c.is_finite()) {
        j["kind"] = "finite";
        j["exponent"] = c.exponent;
        j["cardinality"] = cardinality_brief(c, p);
    } else if (c.is_infinite()) {
        j["kind"] = "infinite";
        j["witness"] = c.note;
    } else {
        j["kind"] = "undetermined";
        j["reason"] = c.note;
    }
    return j;
}

inline ordered_json prime_to_json(const height_one_prime& q) {
    ordered_json j;
    if (q.is_p()) {
        j["poly"] = "p";
        j["cert"] = "prime_p";
    } else {
        j["poly"] = to_text(q.gen().get());
        j["cert"] = certificate_name(q.cert());
    }
    return j;
}

}  // namespace iwa
