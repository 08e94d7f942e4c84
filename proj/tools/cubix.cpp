// cubix: classify, factor and compare orbits of binary cubics; run the
// finite-field orbit census and the identity verification suite.
//
// Input cubics are raw coefficient vectors p0,p1,p2,p3 meaning
// p0 x^3 + p1 x^2 y + p2 x y^2 + p3 y^3 (no 3-convention at the boundary).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cubix/io.hpp"

namespace {

using cubix::json;

void emit(const json& out, const std::string& path, bool pretty) {
    std::string text = pretty ? out.dump(2) : out.dump();
    if (!path.empty()) {
        std::ofstream f(path);
        f << text << "\n";
    }
    std::cout << text << "\n";
}

std::string pretty_cubic(const cubix::BinaryCubic& p) {
    auto r = p.raw();
    return r[0].str() + "*x^3 + " + r[1].str() + "*x^2y + " + r[2].str() + "*xy^2 + " +
           r[3].str() + "*y^3";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symplectic covariants and orbit classification of binary cubics"};
    app.require_subcommand(1);

    std::string field_desc = "rat", cubic_csv, cubic2_csv, group = "sl2";
    std::string disc_str, p_str, q_str, json_path;
    unsigned long trials = 1000, seed = 42;
    bool pretty = false, check = false;

    auto add_common = [&](CLI::App* sub, bool needs_cubic) {
        sub->add_option("--field", field_desc, "field descriptor: rat | fp:<p> | quad:rat:<D> | quad:fp:<p>:<d>");
        if (needs_cubic) sub->add_option("--cubic", cubic_csv, "cubic p0,p1,p2,p3")->required();
        sub->add_option("--json", json_path, "also write the JSON output to this path");
        sub->add_flag("--pretty", pretty, "indent JSON and add a human-readable summary");
        return sub;
    };

    auto* c_classify = add_common(app.add_subcommand("classify", "stratum, Q_n and orbit invariant"), true);
    auto* c_invariant = add_common(app.add_subcommand("invariant", "Sl(2,k)-orbit invariant"), true);
    auto* c_factor = add_common(app.add_subcommand("factor", "complete factorization over k"), true);
    c_factor->add_flag("--check", check, "re-expand the factorization and compare to the input");
    auto* c_same = add_common(app.add_subcommand("same-orbit", "orbit equality of two cubics"), true);
    c_same->add_option("--cubic2", cubic2_csv, "second cubic p0,p1,p2,p3")->required();
    c_same->add_option("--group", group, "sl2 | gl2")->check(CLI::IsMember({"sl2", "gl2"}));
    auto* c_compose = add_common(app.add_subcommand("compose", "group law on orbits of fixed discriminant"), true);
    c_compose->add_option("--cubic2", cubic2_csv, "second cubic p0,p1,p2,p3")->required();
    c_compose->add_option("--disc", disc_str, "common discriminant M")->required();
    auto* c_census = add_common(app.add_subcommand("census", "exhaustive orbit census over F_p"), false);
    auto* c_verify = add_common(app.add_subcommand("verify", "seeded identity verification suite"), false);
    c_verify->add_option("--trials", trials, "trials per identity");
    c_verify->add_option("--seed", seed, "sampler seed");
    auto* c_root = add_common(app.add_subcommand("root", "k-root of the depressed cubic t^3+pt+q"), false);
    c_root->add_option("--p", p_str, "coefficient p")->required();
    c_root->add_option("--q", q_str, "coefficient q")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        cubix::FieldPtr field = cubix::Field::parse_descriptor(field_desc);
        json out;
        int code = 0;

        if (c_classify->parsed()) {
            cubix::BinaryCubic p = cubix::cubic_from_csv(field, cubic_csv);
            out = cubix::classify_json(p);
            if (pretty)
                std::cout << pretty_cubic(p) << "\n  stratum " << out["stratum"].get<std::string>()
                          << ", Q_n = " << out["qn"].get<std::string>() << "\n";
        } else if (c_invariant->parsed()) {
            cubix::BinaryCubic p = cubix::cubic_from_csv(field, cubic_csv);
            out = cubix::invariant_json(cubix::invariant_of(p));
        } else if (c_factor->parsed()) {
            cubix::BinaryCubic p = cubix::cubic_from_csv(field, cubic_csv);
            cubix::Factorization fz = cubix::full_factor(p);
            out = cubix::factorization_json(fz);
            if (check) out["check"] = (fz.expand() == p.form());
        } else if (c_same->parsed()) {
            cubix::BinaryCubic p = cubix::cubic_from_csv(field, cubic_csv);
            cubix::BinaryCubic p2 = cubix::cubic_from_csv(field, cubic2_csv);
            bool same = (group == "gl2") ? cubix::same_gl2_orbit(p, p2)
                                         : cubix::same_sl2_orbit(p, p2);
            out = {{"group", group}, {"same", same}};
        } else if (c_compose->parsed()) {
            cubix::BinaryCubic p = cubix::cubic_from_csv(field, cubic_csv);
            cubix::BinaryCubic p2 = cubix::cubic_from_csv(field, cubic2_csv);
            cubix::Elem m = field->parse_element(disc_str);
            cubix::BinaryCubic rep = cubix::orbit_compose(m, p, p2);
            out = {{"representative", cubix::cubic_json(rep)},
                   {"invariant", cubix::invariant_json(cubix::invariant_of(rep))}};
        } else if (c_census->parsed()) {
            out = cubix::census_json(cubix::census(field));
        } else if (c_verify->parsed()) {
            auto reports = cubix::verify_suite(seed, trials, field);
            out = cubix::trial_reports_json(reports);
            for (const auto& r : reports)
                if (!r.pass()) code = 1;
        } else if (c_root->parsed()) {
            auto t = cubix::cardano_root(field->parse_element(p_str), field->parse_element(q_str));
            out = {{"root", t ? json(t->str()) : json(nullptr)}};
        }

        emit(out, json_path, pretty);
        return code;
    } catch (const cubix::Error& e) {
        emit(json{{"error", e.what()}}, json_path, pretty);
        return 1;
    }
}
