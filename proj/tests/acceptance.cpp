// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "laws.hpp"

#include "prolongate/pipeline.hpp"

#include <iostream>
#include <sstream>

using namespace prolong;

namespace {

int failures = 0;

void line(int n, bool ok, const std::string& what, const std::string& detail) {
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << what;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    failures += !ok;
}

const Json* find(const Report& r, const std::string& name) {
    for (auto& j : r.records)
        if (j.value("name", "") == name) return &j;
    return nullptr;
}

std::string failed_names(const Report& r) {
    std::string s;
    for (auto& j : r.records) {
        std::string v = j.value("verdict", "");
        if (v != "pass" && v != "info" && v != "inconclusive") s += (s.empty() ? "" : " ") + j.value("name", "");
    }
    return s;
}

template <class F>
void guarded(int n, const std::string& what, F f) {
    try {
        f();
    } catch (const std::exception& e) {
        line(n, false, what, std::string("error: ") + e.what());
    }
}

}  // namespace

int main() {
    const std::vector<std::string> signs = {"ishimori-compact", "ishimori-noncompact"};
    RunOptions opt;

    guarded(1, "ideal closedness", [&] {
        bool ok = true;
        std::ostringstream d;
        for (auto& p : signs) {
            Report r = run("closure-check", p, opt);
            int member = 0, inconclusive = 0;
            for (auto& j : r.records) {
                member += j["verdict"] == "pass";
                inconclusive += j["verdict"] == "inconclusive";
            }
            ok = ok && r.pass;
            d << p << ": " << member << " member, " << inconclusive << " inconclusive of " << r.records.size() << "; ";
        }
        line(1, ok, "ideal closedness", d.str());
    });

    guarded(2, "pullback equivalence", [&] {
        bool ok = true;
        std::string bad;
        for (auto& p : signs) {
            Report r = run("pullback-equivalence", p, opt);
            ok = ok && r.pass;
            bad += failed_names(r);
        }
        line(2, ok, "pullback equivalence", bad);
    });

    guarded(3, "constraint extraction vs reference", [&] {
        bool ok = true;
        std::ostringstream d;
        for (auto& p : signs) {
            Report r = run("extract", p, opt);
            const Json* ref = find(r, "reference-constraints");
            bool all = ref && (*ref)["unmatched"].empty();
            ok = ok && r.pass && all;
            if (ref) d << p << ": " << (*ref)["matched"].get<int>() << "/" << (*ref)["total"].get<int>() << " matched, unmatched "
                       << (*ref)["unmatched"].dump() << "; ";
        }
        line(3, ok, "constraint extraction vs reference", d.str());
    });

    guarded(4, "relation collection vs reference", [&] {
        Report r = run("collect-relations", "ishimori-compact", opt);
        const Json* ref = find(r, "reference-relations");
        bool ok = r.pass && ref && (*ref)["count"] == (*ref)["reference_count"] && (*ref)["unmatched"].empty();
        std::ostringstream d;
        if (ref)
            d << (*ref)["count"].get<int>() << " collected vs " << (*ref)["reference_count"].get<int>() << " reference, "
              << (*ref)["unit_matches"].size() << " unit matches, outside reference span " << (*ref)["outside_reference"].dump();
        for (auto p : {"ishimori-noncompact", "ishimori-symbolic"}) {
            Report q = run("collect-relations", p, opt);
            ok = ok && q.pass;
            d << "; " << p << " recorded " << (q.pass ? "ok" : "changed");
        }
        line(4, ok, "relation collection vs reference", d.str());
    });

    for (auto [n, t] : {std::pair{5, "sl2"}, std::pair{6, "loop"}}) {
        std::string what = std::string(t) + " realization";
        guarded(n, what, [&] {
            bool ok = true;
            std::ostringstream d;
            for (auto p : {"ishimori-compact", "ishimori-noncompact", "ishimori-symbolic"}) {
                Report r = run(std::string("verify-realization ") + t, p, opt);
                ok = ok && r.pass;
                int spots = 0;
                for (auto& j : r.records) spots += j["name"].get<std::string>().rfind("spot[", 0) == 0;
                d << p << ": " << r.records.size() - spots << " images, " << spots << " spot checks" << (r.pass ? "" : " FAILED " + failed_names(r)) << "; ";
            }
            line(n, ok, what, d.str());
        });
    }

    guarded(7, "oracle consistency", [&] {
        bool ok = true;
        double worst = 0;
        int n = 0;
        for (auto p : {"ishimori-compact", "ishimori-noncompact", "ishimori-symbolic"}) {
            Report r = run("oracle", p, opt);
            ok = ok && r.pass;
            for (auto& j : r.records) {
                worst = std::max(worst, j["max_abs"].get<double>());
                ok = ok && j["n"] == 100 && j["max_abs"].get<double>() < 1e-9;
                ++n;
            }
        }
        std::ostringstream d;
        d << n << " claims at 100 points, max scaled residual " << worst;
        line(7, ok, "oracle consistency", d.str());
    });

    guarded(8, "algebra laws", [&] {
        std::ostringstream d;
        int bad = 0;
        auto law = [&](const std::string& name, int b) {
            bad += b;
            d << name << " " << laws::kCases - b << "/" << laws::kCases << "; ";
        };
        law("d^2", laws::dd());
        law("leibniz", laws::leibniz());
        law("wedge", laws::graded_commutative());
        law("jacobi-free", laws::jacobi_free());
        law("jacobi-sl2", laws::jacobi_target(TargetKind::sl2));
        law("jacobi-loop", laws::jacobi_target(TargetKind::loop));
        law("morphism-sl2", laws::morphism("sl2"));
        law("morphism-loop", laws::morphism("loop"));
        line(8, bad == 0, "algebra laws", d.str());
    });

    guarded(9, "determinism", [&] {
        bool ok = true;
        for (auto p : {"ishimori-compact", "ishimori-noncompact"}) {
            std::string a = run("all", p, opt).jsonl(false), b = run("all", p, opt).jsonl(false);
            ok = ok && a == b;
        }
        line(9, ok, "determinism", "two run(all) per problem, timing stripped");
    });

    std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failing" : "acceptance: all criteria pass") << "\n";
    return failures ? 1 : 0;
}
