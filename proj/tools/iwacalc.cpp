// iwacalc: exact p-adic module calculator.
//
// Subcommands: factor, bad-primes, euler, scan, alt-product, oracle,
// arith-prime.  Global flags --p/--precision/--guard pick the working
// context, --json switches to machine output, --verify forces an
// independent brute-force cross-check of every fast-path answer.
//
// Exit codes: 0 when the requested quantity is finite and determinate
// (for scan: always, the cells speak for themselves), 1 for a definite
// non-finite or undetermined result (or a failed cross-check), 2 for
// validation errors.
//
// When IWACALC_CACHE_DIR is set, factor and bad-primes results are cached
// in a JSON file there; the cache is never consulted under --verify.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <iwa/iwa.hpp>

using namespace iwa;

namespace {

struct global_opts {
    long p = 3;
    int precision = 12;
    int guard = 4;
    bool json = false;
    bool verify = false;
};

// ---------------------------------------------------------------- cache

std::optional<std::string> cache_file_path() {
    const char* dir = std::getenv("IWACALC_CACHE_DIR");
    if (!dir || !*dir) return std::nullopt;
    return std::string(dir) + "/iwacalc-cache.json";
}

ordered_json load_cache_file() {
    auto path = cache_file_path();
    if (!path) return ordered_json::object();
    std::ifstream in(*path);
    if (!in) return ordered_json::object();
    try {
        ordered_json j;
        in >> j;
        return j.is_object() ? j : ordered_json::object();
    } catch (...) {
        return ordered_json::object();
    }
}

std::optional<ordered_json> cache_get(const std::string& key, bool verify) {
    if (verify || !cache_file_path()) return std::nullopt;
    ordered_json all = load_cache_file();
    if (all.contains(key)) return all[key];
    return std::nullopt;
}

void cache_put(const std::string& key, const ordered_json& payload, bool verify) {
    auto path = cache_file_path();
    if (verify || !path) return;
    ordered_json all = load_cache_file();
    all[key] = payload;
    std::ofstream out(*path);
    if (out) out << all.dump(2) << "\n";
}

// ---------------------------------------------------------------- shared

void emit(const global_opts& g, const ordered_json& out,
          const std::function<void(const ordered_json&)>& human) {
    if (g.json)
        std::cout << out.dump(2) << "\n";
    else
        human(out);
}

height_one_prime prime_from_text(const padic_context& ctx, const std::string& text) {
    poly gen = parse_poly(ctx, text);
    if (auto cert = certify_distinguished(gen)) return *cert;
    return height_one_prime(distinguished_poly(gen), prime_certificate::user_asserted);
}

std::string agreement(const cardinality& fast, const cardinality& check) {
    if (check.is_undetermined()) return fast.is_undetermined() ? "confirmed" : "unconfirmed";
    if (fast.is_undetermined()) return "unconfirmed";
    if (fast.is_finite() != check.is_finite()) return "mismatch";
    if (fast.is_finite() && fast.exponent != check.exponent) return "mismatch";
    return "confirmed";
}

cardinality cardinality_from_json(const ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") return cardinality::finite(j.at("exponent").get<long>());
    if (kind == "infinite") return cardinality::infinite(j.value("witness", ""));
    return cardinality::undetermined(j.value("reason", ""));
}

std::string signed_power(long p, long e) {
    return std::to_string(p) + "^" + std::to_string(e);
}

// ---------------------------------------------------------------- factor

int run_factor(const global_opts& g, const padic_context& ctx, const std::string& poly_text,
               const std::string& hints_text, long long lambda, int n) {
    const bool family = n >= 0;
    std::vector<poly> hints =
        hints_text.empty() ? std::vector<poly>{} : parse_poly_list(ctx, hints_text);
    std::optional<poly> input;
    std::string key;
    if (family) {
        // factor (1+X)^{p^n} - (1+p*lambda)^{p^n}, seeding the division with the
        // telescoping quotients so every level splits off with a certificate
        mpz_class lam(static_cast<long>(lambda));
        mpz_class lam_mod;
        mpz_fdiv_r(lam_mod.get_mpz_t(), lam.get_mpz_t(), ctx.modulus().get_mpz_t());
        long pn = 1;
        for (int i = 0; i < n; ++i) pn *= ctx.p();
        mpz_class c = 1 + ctx.p() * lam;
        mpz_class cpn;
        mpz_pow_ui(cpn.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(pn));
        input = iwa::detail::binomial_power_minus(ctx, pn, cpn);
        for (const auto& q : bad_prime_set(ctx, lam, n)) hints.push_back(q.gen().get());
        key = "factor/" + std::to_string(ctx.p()) + "/" + std::to_string(ctx.precision()) +
              "/" + lam_mod.get_str() + "/" + std::to_string(n);
    } else {
        input = parse_poly(ctx, poly_text);
        key = "factor/" + std::to_string(ctx.p()) + "/" + std::to_string(ctx.precision()) +
              "/" + to_text(*input) + "/" + hints_text;
    }
    const poly& f = *input;

    ordered_json out;
    auto cached = cache_get(key, g.verify);
    if (cached) {
        out = *cached;
    } else {
        factor_result fr = factor_poly(f, hints);
        out["p"] = ctx.p();
        out["precision"] = ctx.precision();
        if (family) {
            out["lambda"] = lambda;
            out["n"] = n;
        }
        out["input"] = to_text(f);
        out["mu"] = fr.mu;
        out["unit"] = to_text(fr.unit);
        ordered_json facs = ordered_json::array();
        for (const auto& pp : fr.factors) {
            ordered_json fj = prime_to_json(pp.prime);
            fj["multiplicity"] = pp.multiplicity;
            facs.push_back(std::move(fj));
        }
        out["factors"] = std::move(facs);
        out["unfactored"] = fr.unfactored ? ordered_json(to_text(*fr.unfactored))
                                          : ordered_json(nullptr);
        out["complete"] = fr.complete();
        cache_put(key, out, g.verify);
    }

    if (g.verify) {
        // multiply everything back together and compare with the input
        poly prod = poly::constant(padic_int(ctx, ctx.pow_p(out["mu"].get<int>()))) *
                    parse_poly(ctx, out["unit"].get<std::string>());
        for (const auto& fj : out["factors"])
            for (int i = 0; i < fj["multiplicity"].get<int>(); ++i)
                prod = prod * parse_poly(ctx, fj["poly"].get<std::string>());
        if (!out["unfactored"].is_null())
            prod = prod * parse_poly(ctx, out["unfactored"].get<std::string>());
        out["verify"] = prod == f ? "confirmed" : "mismatch";
    }

    emit(g, out, [&](const ordered_json& j) {
        std::cout << "input: " << j["input"].get<std::string>() << "\n";
        std::cout << "mu: " << j["mu"].get<int>() << "\n";
        std::cout << "unit: " << j["unit"].get<std::string>() << "\n";
        std::cout << "factors:\n";
        for (const auto& fj : j["factors"])
            std::cout << "  " << fj["poly"].get<std::string>() << " ["
                      << fj["cert"].get<std::string>() << "] multiplicity "
                      << fj["multiplicity"].get<int>() << "\n";
        if (!j["unfactored"].is_null())
            std::cout << "unfactored: " << j["unfactored"].get<std::string>() << "\n";
        std::cout << "complete: " << (j["complete"].get<bool>() ? "yes" : "no") << "\n";
        if (j.contains("verify")) std::cout << "verify: " << j["verify"].get<std::string>() << "\n";
    });

    if (out.contains("verify") && out["verify"] == "mismatch") return 1;
    return out["complete"].get<bool>() ? 0 : 1;
}

// ---------------------------------------------------------------- bad-primes

int run_bad_primes(const global_opts& g, const padic_context& ctx, long long lambda, int n_max) {
    mpz_class lam(static_cast<long>(lambda));
    mpz_class lam_mod;
    mpz_fdiv_r(lam_mod.get_mpz_t(), lam.get_mpz_t(), ctx.modulus().get_mpz_t());
    std::string key = "bad-primes/" + std::to_string(ctx.p()) + "/" +
                      std::to_string(ctx.precision()) + "/" + lam_mod.get_str() + "/" +
                      std::to_string(n_max);
    ordered_json out;
    auto cached = cache_get(key, g.verify);
    if (cached) {
        out = *cached;
    } else {
        out["p"] = ctx.p();
        out["precision"] = ctx.precision();
        out["lambda"] = lambda;
        out["n_max"] = n_max;
        std::vector<std::vector<std::string>> texts;
        ordered_json levels = ordered_json::array();
        for (int n = 0; n <= n_max; ++n) {
            std::vector<height_one_prime> primes = bad_prime_set(ctx, lam, n);
            ordered_json lvl;
            lvl["n"] = n;
            ordered_json arr = ordered_json::array();
            std::vector<std::string> ts;
            for (const auto& q : primes) {
                arr.push_back(prime_to_json(q));
                ts.push_back(to_text(q.gen().get()));
            }
            lvl["primes"] = std::move(arr);
            levels.push_back(std::move(lvl));
            texts.push_back(std::move(ts));
        }
        out["levels"] = std::move(levels);
        ordered_json growth = ordered_json::array();
        for (int n = 0; n < n_max; ++n) {
            const auto& lo = texts[static_cast<size_t>(n)];
            const auto& hi = texts[static_cast<size_t>(n) + 1];
            bool prefix = lo.size() < hi.size() &&
                          std::equal(lo.begin(), lo.end(), hi.begin());
            ordered_json gj;
            gj["from"] = n;
            gj["to"] = n + 1;
            gj["strict"] = prefix;
            ordered_json fresh = ordered_json::array();
            if (prefix)
                for (size_t i = lo.size(); i < hi.size(); ++i) fresh.push_back(hi[i]);
            gj["new_primes"] = std::move(fresh);
            growth.push_back(std::move(gj));
        }
        out["growth"] = std::move(growth);
        cache_put(key, out, g.verify);
    }

    if (g.verify) {
        // at each level the listed generators must multiply back to (1+X)^{p^n} - c^{p^n}
        mpz_class c = 1 + ctx.p() * lam;
        bool ok = true;
        for (const auto& lvl : out["levels"]) {
            long pn = 1;
            for (int i = 0; i < lvl["n"].get<int>(); ++i) pn *= ctx.p();
            mpz_class cpn;
            mpz_pow_ui(cpn.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(pn));
            poly target = iwa::detail::binomial_power_minus(ctx, pn, cpn);
            poly prod = poly::constant(padic_int::one(ctx));
            for (const auto& pj : lvl["primes"])
                prod = prod * parse_poly(ctx, pj["poly"].get<std::string>());
            if (!(prod == target)) ok = false;
        }
        out["verify"] = ok ? "confirmed" : "mismatch";
    }

    emit(g, out, [&](const ordered_json& j) {
        std::cout << "lambda: " << j["lambda"].get<long long>() << "\n";
        for (const auto& lvl : j["levels"]) {
            std::cout << "level p^" << lvl["n"].get<int>() << " (" << lvl["primes"].size()
                      << " primes):\n";
            for (const auto& pj : lvl["primes"])
                std::cout << "  " << pj["poly"].get<std::string>() << " ["
                          << pj["cert"].get<std::string>() << "]\n";
        }
        for (const auto& gj : j["growth"])
            std::cout << "strict growth " << gj["from"].get<int>() << " -> "
                      << gj["to"].get<int>() << ": "
                      << (gj["strict"].get<bool>() ? "OK" : "FAILED") << "\n";
        if (j.contains("verify")) std::cout << "verify: " << j["verify"].get<std::string>() << "\n";
    });

    bool strict_all = true;
    for (const auto& gj : out["growth"])
        if (!gj["strict"].get<bool>()) strict_all = false;
    if (out.contains("verify") && out["verify"] == "mismatch") return 1;
    return strict_all ? 0 : 1;
}

// ---------------------------------------------------------------- euler

int run_euler(const global_opts& g, const padic_context& ctx, const std::string& module_path,
              long long lambda, const std::string& q_text, int n, int box_a) {
    cyclic_presentation m = presentation_from_file(ctx, load_module_file(module_path));
    wild_character th(ctx, mpz_class(static_cast<long>(lambda)));
    height_one_prime q = prime_from_text(ctx, q_text);
    oracle_box box{box_a};

    euler_result er = euler_characteristic(m, th, q, n, box);
    ordered_json out;
    out["p"] = ctx.p();
    out["precision"] = ctx.precision();
    out["module"] = module_path;
    out["lambda"] = lambda;
    out["q"] = to_text(q.gen().get());
    out["n"] = n;
    out["h0"] = cardinality_to_json(er.h0, ctx.p());
    out["h1"] = cardinality_to_json(er.h1, ctx.p());
    out["h0_method"] = er.h0_method;
    out["h1_method"] = er.h1_method;
    out["chi_defined"] = er.chi_defined;
    if (er.chi_defined) out["chi_exponent"] = er.chi_exponent;

    if (g.verify) {
        cyclic_presentation tw = m.twist(th);
        specialized_module sm = specialize(tw, q);
        std::vector<bivar> gens = sm.source;
        gens.push_back(omega_level(ctx, n));
        oracle_report o0 = brute_cardinality(ctx, gens, box);
        oracle_report o1 = brute_kernel_cardinality(ctx, sm.source, omega_level(ctx, n), box);
        out["verify"] = ordered_json::object();
        out["verify"]["h0"] = agreement(er.h0, o0.card);
        out["verify"]["h0_oracle"] = cardinality_to_json(o0.card, ctx.p());
        out["verify"]["h1"] = agreement(er.h1, o1.card);
        out["verify"]["h1_oracle"] = cardinality_to_json(o1.card, ctx.p());
    }

    emit(g, out, [&](const ordered_json& j) {
        std::cout << "module: " << j["module"].get<std::string>() << "\n";
        std::cout << "twist lambda: " << j["lambda"].get<long long>() << ", Q = ("
                  << j["q"].get<std::string>() << "), level p^" << j["n"].get<int>() << "\n";
        std::cout << "h0: " << cardinality_brief(cardinality_from_json(j["h0"]), ctx.p()) << " ["
                  << j["h0_method"].get<std::string>() << "]\n";
        if (j["h0"].contains("witness"))
            std::cout << "  witness: " << j["h0"]["witness"].get<std::string>() << "\n";
        if (j["h0"].contains("reason"))
            std::cout << "  reason: " << j["h0"]["reason"].get<std::string>() << "\n";
        std::cout << "h1: " << cardinality_brief(cardinality_from_json(j["h1"]), ctx.p()) << " ["
                  << j["h1_method"].get<std::string>() << "]\n";
        if (j["h1"].contains("witness"))
            std::cout << "  witness: " << j["h1"]["witness"].get<std::string>() << "\n";
        if (j["h1"].contains("reason"))
            std::cout << "  reason: " << j["h1"]["reason"].get<std::string>() << "\n";
        if (j["chi_defined"].get<bool>())
            std::cout << "chi: " << signed_power(ctx.p(), j["chi_exponent"].get<long>()) << "\n";
        else
            std::cout << "chi: undefined\n";
        if (j.contains("verify")) {
            std::cout << "verify h0: " << j["verify"]["h0"].get<std::string>() << "\n";
            std::cout << "verify h1: " << j["verify"]["h1"].get<std::string>() << "\n";
        }
    });

    if (out.contains("verify") &&
        (out["verify"]["h0"] == "mismatch" || out["verify"]["h1"] == "mismatch"))
        return 1;
    return er.chi_defined ? 0 : 1;
}

// ---------------------------------------------------------------- scan

int run_scan(const global_opts& g, const padic_context& ctx, const std::string& module_path,
             const std::string& lambdas_text, const std::string& primes_text, int n_max,
             int box_a, bool serial, int k_max, int r_max) {
    cyclic_presentation m = presentation_from_file(ctx, load_module_file(module_path));
    std::vector<mpz_class> lambdas;
    auto dots = lambdas_text.find("..");
    if (dots != std::string::npos) {
        mpz_class lo(lambdas_text.substr(0, dots), 10);
        mpz_class hi(lambdas_text.substr(dots + 2), 10);
        for (mpz_class v = lo; v <= hi; ++v) lambdas.push_back(v);
    } else {
        std::stringstream ss(lambdas_text);
        std::string piece;
        while (std::getline(ss, piece, ','))
            if (!piece.empty()) lambdas.push_back(mpz_class(piece, 10));
    }
    if (lambdas.empty()) throw std::invalid_argument("no lambda values given");
    if (n_max < 0) throw std::invalid_argument("n-max must be >= 0");
    std::vector<height_one_prime> primes;
    if (primes_text == "auto") {
        for (long k = 1; k <= k_max; ++k)
            for (int r = 0; r <= r_max; ++r) primes.push_back(arith_prime(ctx, k, r));
    } else {
        for (const poly& f : parse_poly_list(ctx, primes_text)) {
            if (auto cert = certify_distinguished(f))
                primes.push_back(*cert);
            else
                primes.push_back(height_one_prime(distinguished_poly(f),
                                                  prime_certificate::user_asserted));
        }
    }
    if (primes.empty()) throw std::invalid_argument("no primes given");
    oracle_box box{box_a};

    // one grid per level; columns of the combined table are (prime, level) pairs
    std::vector<scan_grid> per_level;
    per_level.reserve(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        per_level.push_back(twist_scan(m, lambdas, primes, n, box, !serial));
    const size_t ncols = primes.size() * (static_cast<size_t>(n_max) + 1);
    auto cell_at = [&](size_t i, size_t col) -> const cardinality& {
        size_t q = col / (static_cast<size_t>(n_max) + 1);
        size_t n = col % (static_cast<size_t>(n_max) + 1);
        return per_level[n].cells[i][q];
    };

    ordered_json out;
    out["p"] = ctx.p();
    out["precision"] = ctx.precision();
    out["module"] = module_path;
    out["n_max"] = n_max;
    ordered_json lam_arr = ordered_json::array();
    for (const auto& l : lambdas) lam_arr.push_back(l.get_str());
    out["lambdas"] = std::move(lam_arr);
    ordered_json col_arr = ordered_json::array();
    for (size_t c = 0; c < ncols; ++c) {
        const auto& q = primes[c / (static_cast<size_t>(n_max) + 1)];
        ordered_json cj = prime_to_json(q);
        cj["n"] = static_cast<int>(c % (static_cast<size_t>(n_max) + 1));
        col_arr.push_back(std::move(cj));
    }
    out["columns"] = std::move(col_arr);
    ordered_json cells = ordered_json::array();
    ordered_json admissible = ordered_json::array();
    for (size_t i = 0; i < lambdas.size(); ++i) {
        ordered_json r = ordered_json::array();
        bool all_finite = true;
        for (size_t c = 0; c < ncols; ++c) {
            const cardinality& cc = cell_at(i, c);
            if (cc.k != cardinality::kind::finite) all_finite = false;
            r.push_back(cardinality_to_json(cc, ctx.p()));
        }
        cells.push_back(std::move(r));
        if (all_finite) admissible.push_back(lambdas[i].get_str());
    }
    out["cells"] = std::move(cells);
    out["admissible_lambdas"] = std::move(admissible);

    bool verify_mismatch = false;
    if (g.verify) {
        ordered_json vgrid = ordered_json::array();
        for (size_t i = 0; i < lambdas.size(); ++i) {
            cyclic_presentation tw = m.twist(wild_character(ctx, lambdas[i]));
            ordered_json vrow = ordered_json::array();
            for (size_t c = 0; c < ncols; ++c) {
                size_t qi = c / (static_cast<size_t>(n_max) + 1);
                int n = static_cast<int>(c % (static_cast<size_t>(n_max) + 1));
                specialized_module sm = specialize(tw, primes[qi]);
                std::vector<bivar> gens = sm.source;
                gens.push_back(omega_level(ctx, n));
                oracle_report rep = brute_cardinality(ctx, gens, box);
                std::string verdict = agreement(cell_at(i, c), rep.card);
                if (verdict == "mismatch") verify_mismatch = true;
                vrow.push_back(verdict);
            }
            vgrid.push_back(std::move(vrow));
        }
        out["verify"] = std::move(vgrid);
    }

    emit(g, out, [&](const ordered_json& j) {
        std::vector<std::string> headers;
        for (const auto& cj : j["columns"])
            headers.push_back("(" + cj["poly"].get<std::string>() + ") n=" +
                              std::to_string(cj["n"].get<int>()));
        size_t lw = 8;
        for (const auto& l : j["lambdas"])
            lw = std::max(lw, l.get<std::string>().size() + 8);
        std::vector<size_t> w(headers.size());
        for (size_t c = 0; c < headers.size(); ++c) w[c] = headers[c].size();
        std::vector<std::vector<std::string>> cellstr;
        for (const auto& row : j["cells"]) {
            std::vector<std::string> rs;
            for (size_t c = 0; c < row.size(); ++c) {
                rs.push_back(cardinality_brief(cardinality_from_json(row[c]), ctx.p()));
                w[c] = std::max(w[c], rs.back().size());
            }
            cellstr.push_back(std::move(rs));
        }
        std::cout << std::left << std::setw(static_cast<int>(lw)) << "twist";
        for (size_t c = 0; c < headers.size(); ++c)
            std::cout << "  " << std::setw(static_cast<int>(w[c])) << headers[c];
        std::cout << "\n";
        for (size_t i = 0; i < cellstr.size(); ++i) {
            std::cout << std::setw(static_cast<int>(lw))
                      << ("lambda=" + j["lambdas"][i].get<std::string>());
            for (size_t c = 0; c < cellstr[i].size(); ++c)
                std::cout << "  " << std::setw(static_cast<int>(w[c])) << cellstr[i][c];
            std::cout << "\n";
        }
        if (j["admissible_lambdas"].empty()) {
            std::cout << "no admissible twist among candidates\n";
        } else {
            std::cout << "admissible lambdas:";
            for (const auto& l : j["admissible_lambdas"])
                std::cout << " " << l.get<std::string>();
            std::cout << "\n";
        }
        if (j.contains("verify")) {
            bool ok = true;
            for (const auto& vrow : j["verify"])
                for (const auto& v : vrow)
                    if (v.get<std::string>() == "mismatch") ok = false;
            std::cout << "verify: " << (ok ? "all cells confirmed or unconfirmed" : "MISMATCH")
                      << "\n";
        }
    });

    return verify_mismatch ? 1 : 0;
}

// ---------------------------------------------------------------- alt-product

int run_alt_product(const global_opts& g, const padic_context& ctx,
                    const std::string& elements_text, const std::string& file_path,
                    const std::string& q_text) {
    std::vector<poly> elements;
    if (!file_path.empty()) {
        std::ifstream in(file_path);
        if (!in) throw std::invalid_argument("cannot open " + file_path);
        ordered_json doc = ordered_json::parse(in, nullptr, true);
        const ordered_json& arr = doc.is_array() ? doc : doc.at("elements");
        if (!arr.is_array()) throw parse_error("\"elements\" must be an array");
        for (const auto& e : arr) elements.push_back(parse_poly(ctx, e.get<std::string>()));
    } else {
        if (!elements_text.empty()) elements = parse_poly_list(ctx, elements_text);
    }
    if (elements.empty()) throw std::invalid_argument("no elements given");
    height_one_prime q = prime_from_text(ctx, q_text);
    alt_product_result ar = alternating_product(elements, q);

    ordered_json out;
    out["p"] = ctx.p();
    out["precision"] = ctx.precision();
    out["q"] = to_text(q.gen().get());
    ordered_json terms = ordered_json::array();
    for (const auto& t : ar.terms) {
        ordered_json tj;
        tj["element"] = to_text(t.element);
        tj["sign"] = t.sign;
        tj["card"] = cardinality_to_json(t.card, ctx.p());
        terms.push_back(std::move(tj));
    }
    out["terms"] = std::move(terms);
    out["defined"] = ar.defined;
    if (ar.defined) out["exponent"] = ar.exponent;
    if (!ar.defined) out["failed_index"] = ar.failed_index;

    if (g.verify) {
        // independent route: each term exponent is v_p(res(g, element))
        bool ok = true;
        for (const auto& t : ar.terms) {
            padic_int r = resultant(q.gen().get(), t.element);
            valuation v = r.val();
            if (t.card.is_finite()) {
                if (!v.exact || v.v != t.card.exponent) ok = false;
            } else if (v.exact && v.v < ctx.certified()) {
                ok = false;
            }
        }
        out["verify"] = ok ? "confirmed" : "mismatch";
    }

    emit(g, out, [&](const ordered_json& j) {
        std::cout << "Q = (" << j["q"].get<std::string>() << ")\n";
        std::cout << "terms:\n";
        for (const auto& tj : j["terms"]) {
            cardinality c = cardinality_from_json(tj["card"]);
            std::cout << "  " << (tj["sign"].get<int>() > 0 ? "+" : "-") << " |O/("
                      << tj["element"].get<std::string>()
                      << ")| = " << cardinality_brief(c, ctx.p()) << "\n";
        }
        if (j["defined"].get<bool>())
            std::cout << "alternating product: "
                      << signed_power(ctx.p(), j["exponent"].get<long>()) << "\n";
        else
            std::cout << "alternating product: undefined (term "
                      << j["failed_index"].get<int>() << " is not finite)\n";
        if (j.contains("verify")) std::cout << "verify: " << j["verify"].get<std::string>() << "\n";
    });

    if (out.contains("verify") && out["verify"] == "mismatch") return 1;
    return ar.defined ? 0 : 1;
}

// ---------------------------------------------------------------- oracle

int run_oracle(const global_opts& g, const padic_context& ctx, const std::string& gens_text,
               const std::string& kernel_text, int box_a) {
    std::vector<bivar> gens;
    {
        std::string piece;
        std::stringstream ss(gens_text);
        while (std::getline(ss, piece, ';')) {
            bool blank = true;
            for (char c : piece)
                if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
            if (!blank) gens.push_back(parse_bivar(ctx, piece));
        }
    }
    if (gens.empty()) throw std::invalid_argument("no generators given");
    oracle_box box{box_a};

    oracle_report rep = kernel_text.empty()
                            ? brute_cardinality(ctx, gens, box)
                            : brute_kernel_cardinality(ctx, gens, parse_bivar(ctx, kernel_text),
                                                       box);

    ordered_json out;
    out["p"] = ctx.p();
    out["precision"] = ctx.precision();
    ordered_json garr = ordered_json::array();
    for (const auto& gen : gens) garr.push_back(to_text(gen));
    out["gens"] = std::move(garr);
    if (!kernel_text.empty()) out["kernel_of"] = to_text(parse_bivar(ctx, kernel_text));
    out["model"] = rep.model;
    ordered_json tr = ordered_json::array();
    for (const auto& line : rep.trace) tr.push_back(line);
    out["trace"] = std::move(tr);
    out["result"] = cardinality_to_json(rep.card, ctx.p());

    emit(g, out, [&](const ordered_json& j) {
        std::cout << "model: " << j["model"].get<std::string>() << "\n";
        for (const auto& line : j["trace"]) std::cout << "  " << line.get<std::string>() << "\n";
        cardinality c = cardinality_from_json(j["result"]);
        std::cout << (j.contains("kernel_of") ? "kernel: " : "cardinality: ")
                  << cardinality_brief(c, ctx.p()) << "\n";
        if (!c.note.empty())
            std::cout << (c.is_infinite() ? "witness: " : "note: ") << c.note << "\n";
    });

    return rep.card.is_finite() ? 0 : 1;
}

// ---------------------------------------------------------------- arith-prime

int run_arith_prime(const global_opts& g, const padic_context& ctx, long k, int r) {
    height_one_prime q = arith_prime(ctx, k, r);
    ordered_json out;
    out["p"] = ctx.p();
    out["precision"] = ctx.precision();
    out["k"] = k;
    out["r"] = r;
    ordered_json pj = prime_to_json(q);
    out["poly"] = pj["poly"];
    out["cert"] = pj["cert"];

    if (g.verify) {
        // the generator must divide (1+X)^{p^r} - (1+p)^{k p^r} exactly
        long pr = 1;
        for (int i = 0; i < r; ++i) pr *= ctx.p();
        mpz_class base = ctx.p() + 1, c, cpr;
        mpz_pow_ui(c.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k));
        mpz_pow_ui(cpr.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(pr));
        poly target = iwa::detail::binomial_power_minus(ctx, pr, cpr);
        auto [quot, rem] = weierstrass_divide(target, q.gen());
        (void)quot;
        out["verify"] = rem.is_zero() ? "confirmed" : "mismatch";
    }

    emit(g, out, [&](const ordered_json& j) {
        std::cout << j["poly"].get<std::string>() << " [" << j["cert"].get<std::string>()
                  << "]\n";
        if (j.contains("verify")) std::cout << "verify: " << j["verify"].get<std::string>() << "\n";
    });

    if (out.contains("verify") && out["verify"] == "mismatch") return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iwacalc: exact computations with Z_p[[X]][[T]]-modules"};
    app.require_subcommand(1);

    global_opts g;
    app.add_option("--p", g.p, "odd prime p")->capture_default_str();
    app.add_option("--precision", g.precision, "working precision p^N")->capture_default_str();
    app.add_option("--guard", g.guard, "guard digits")->capture_default_str();
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_flag("--verify", g.verify, "cross-check with the brute-force oracle");

    auto* c_factor = app.add_subcommand("factor", "factor a polynomial into height-one primes");
    std::string factor_poly_text, factor_hints;
    long long factor_lambda = 0;
    int factor_n = -1;
    c_factor->add_option("--poly", factor_poly_text, "polynomial in X");
    c_factor->add_option("--hints", factor_hints, "comma-separated candidate divisors");
    c_factor->add_option("--lambda", factor_lambda,
                         "twist parameter; factors the level-p^n norm form instead of --poly");
    c_factor->add_option("--n", factor_n, "level exponent for --lambda mode");

    auto* c_bad = app.add_subcommand("bad-primes", "bad-prime sets of a twist, levels 0..n");
    long long bad_lambda = 0;
    int bad_n = 0;
    c_bad->add_option("--lambda", bad_lambda, "twist parameter lambda")->required();
    c_bad->add_option("--n-max,--n", bad_n, "largest level exponent")->required();

    auto* c_euler = app.add_subcommand("euler", "h0, h1 and Euler exponent of a twisted fiber");
    std::string euler_module, euler_q;
    long long euler_lambda = 0;
    int euler_n = 0, euler_box = -1;
    c_euler->add_option("--module", euler_module, "module JSON file")->required();
    c_euler->add_option("--lambda", euler_lambda, "twist parameter lambda")->required();
    c_euler->add_option("--prime,--q", euler_q, "specializing prime generator")->required();
    c_euler->add_option("--n", euler_n, "level exponent n")->required();
    c_euler->add_option("--box", euler_box, "oracle box exponent");

    auto* c_scan = app.add_subcommand("scan", "h0 grid over twists, primes and levels");
    std::string scan_module, scan_lambdas, scan_primes;
    int scan_n = 0, scan_box = -1, scan_kmax = 2, scan_rmax = 1;
    bool scan_serial = false;
    c_scan->add_option("--module", scan_module, "module JSON file")->required();
    c_scan->add_option("--lambdas", scan_lambdas, "lambda values: a,b,c or a..b")->required();
    c_scan->add_option("--primes", scan_primes,
                       "comma-separated prime generators, or 'auto' for arithmetic primes")
        ->required();
    c_scan->add_option("--n-max,--n", scan_n, "largest level exponent")->required();
    c_scan->add_option("--k-max", scan_kmax, "largest weight for --primes auto")
        ->capture_default_str();
    c_scan->add_option("--r-max", scan_rmax, "largest wild level for --primes auto")
        ->capture_default_str();
    c_scan->add_option("--box", scan_box, "oracle box exponent");
    c_scan->add_flag("--serial", scan_serial, "disable the parallel row scan");

    auto* c_alt = app.add_subcommand("alt-product", "alternating product of fiber cardinalities");
    std::string alt_elements, alt_file, alt_q;
    c_alt->add_option("--elements", alt_elements, "comma-separated elements");
    c_alt->add_option("--file", alt_file, "JSON file with an \"elements\" array");
    c_alt->add_option("--prime,--q", alt_q, "specializing prime generator")->required();

    auto* c_oracle = app.add_subcommand("oracle", "brute-force cardinality of a quotient");
    std::string oracle_gens, oracle_kernel;
    int oracle_box_a = -1;
    c_oracle->add_option("--ideal,--gens", oracle_gens, "semicolon-separated generators")
        ->required();
    c_oracle->add_option("--kernel", oracle_kernel, "compute the kernel of this multiplier");
    c_oracle->add_option("--box", oracle_box_a, "oracle box exponent");

    auto* c_arith = app.add_subcommand("arith-prime", "arithmetic prime for weight k, level r");
    long arith_k = 1;
    int arith_r = 0;
    c_arith->add_option("--k", arith_k, "weight parameter k >= 1")->required();
    c_arith->add_option("--r", arith_r, "wild level r >= 0")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        padic_context ctx(g.p, g.precision, g.guard);
        int default_a = ctx.precision() - 2;
        if (app.got_subcommand(c_factor)) {
            if (factor_n >= 0 && !factor_poly_text.empty())
                throw std::invalid_argument("--poly and --lambda/--n are mutually exclusive");
            if (factor_n < 0 && factor_poly_text.empty())
                throw std::invalid_argument("factor needs --poly, or --lambda with --n");
            return run_factor(g, ctx, factor_poly_text, factor_hints, factor_lambda, factor_n);
        }
        if (app.got_subcommand(c_bad)) return run_bad_primes(g, ctx, bad_lambda, bad_n);
        if (app.got_subcommand(c_euler))
            return run_euler(g, ctx, euler_module, euler_lambda, euler_q, euler_n,
                             euler_box > 0 ? euler_box : default_a);
        if (app.got_subcommand(c_scan))
            return run_scan(g, ctx, scan_module, scan_lambdas, scan_primes, scan_n,
                            scan_box > 0 ? scan_box : default_a, scan_serial, scan_kmax,
                            scan_rmax);
        if (app.got_subcommand(c_alt))
            return run_alt_product(g, ctx, alt_elements, alt_file, alt_q);
        if (app.got_subcommand(c_oracle))
            return run_oracle(g, ctx, oracle_gens, oracle_kernel,
                              oracle_box_a > 0 ? oracle_box_a : default_a);
        if (app.got_subcommand(c_arith)) return run_arith_prime(g, ctx, arith_k, arith_r);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const precision_exhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const context_mismatch& e) {
        std::cerr << "context error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
