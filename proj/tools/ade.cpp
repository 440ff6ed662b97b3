/* Command-line front end: root systems, gradings, case verification,
   band-matrix constructions, local densities, sieves, and the
   prediction-versus-count comparison report. */
#include <algorithm>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ade/anfamily.hpp"
#include "ade/cuspintegral.hpp"
#include "ade/jsonutil.hpp"
#include "ade/rootsystem.hpp"
#include "ade/sieve.hpp"
#include "ade/vinberg.hpp"
#include "json.hpp"

namespace {

int exitCode = 0;

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ",";
        out += n;
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (int x : v) {
        if (!out.empty()) out += " ";
        out += std::to_string(x);
    }
    return out;
}

void cmd_roots(const std::string& type) {
    const auto rs = ade::build_root_system(ade::DynkinType::parse(type));
    std::cout << "type: " << rs.type.label() << "\n";
    std::cout << "rank: " << rs.rank() << "\n";
    std::cout << "roots: " << rs.roots.size() << "\n";
    std::cout << rs.dump();
}

void cmd_grade(const std::string& type) {
    const auto gd = ade::grade(ade::build_root_system(ade::DynkinType::parse(type)));
    int nOdd = 0, nEven = 0, nSplit = 0;
    for (const auto& rr : gd.restricted) {
        if (rr.tag == ade::CaseTag::SPLIT) ++nSplit;
        else if (rr.tag == ade::CaseTag::V_ONLY) ++nOdd;
        else ++nEven;
    }
    std::cout << "type: " << gd.rs.type.label() << "\n";
    std::cout << "rank: " << gd.rs.rank() << "\n";
    std::cout << "roots: " << gd.rs.roots.size() << "\n";
    std::cout << "dim V0: " << gd.dimV0 << "\n";
    std::cout << "dim V: " << gd.dimV << "\n";
    std::cout << "dim G: " << gd.dimG << "\n";
    std::cout << "dim W0: " << gd.dimW0 << "\n";
    std::cout << "height-one count: " << gd.heightOneCount << "\n";
    std::cout << "marked points: " << gd.markedPoints << "\n";
    std::cout << "degrees: " << join_ints(gd.degrees) << "\n";
    std::cout << "restricted roots: " << gd.restricted.size() << " (odd-only " << nOdd
              << ", even-only " << nEven << ", split " << nSplit << ")\n";
    if (!gd.degreesNote.empty()) std::cout << "note: " << gd.degreesNote << "\n";
}

void cmd_verify_case(const std::string& name, bool all, const std::string& jsonPath) {
    std::vector<std::string> names;
    if (all) {
        names = ade::shipped_case_names();
    } else {
        if (name.empty()) throw std::invalid_argument("give a case name or --all");
        names.push_back(name);
    }
    nlohmann::json artifacts = nlohmann::json::array();
    bool allPass = true;
    for (const auto& n : names) {
        const auto rep = ade::verify_case(ade::case_record(n));
        std::cout << rep.table();
        std::cout << "case " << rep.caseName << ": " << (rep.pass ? "PASS" : "FAIL");
        if (rep.pass)
            std::cout << "  [" << rep.preBound.str() << " -> " << rep.finalBound.str() << "]";
        else
            std::cout << "  (" << rep.failReason << ")";
        std::cout << "\n";
        allPass = allPass && rep.pass;
        if (!jsonPath.empty()) artifacts.push_back(nlohmann::json::parse(rep.to_json()));
    }
    if (!jsonPath.empty()) {
        const std::string payload =
            all ? artifacts.dump(2) + "\n" : artifacts[0].dump(2) + "\n";
        ade::write_file_atomic(jsonPath, payload);
        std::cout << "wrote " << jsonPath << "\n";
    }
    if (!allPass) exitCode = 1;
}

void cmd_lambda(const std::string& name) {
    const auto gd = ade::grade(ade::build_root_system(ade::DynkinType::parse(name)));
    const auto r = ade::lambda_exponents(gd);
    std::cout << "type: " << gd.rs.type.label() << "\n";
    std::cout << "exponents:";
    for (const auto& x : r) std::cout << " " << ade::rat_str(x);
    std::cout << "\n";
    std::cout << "zeta product: " << std::fixed << std::setprecision(6)
              << ade::zeta_product(r) << "\n";
}

void cmd_zeta(const std::vector<double>& svals) {
    for (double s : svals)
        std::cout << "zeta(" << s << ") = " << std::fixed << std::setprecision(6)
                  << ade::zeta(s) << "\n";
}

void cmd_disc(const std::string& poly, int degree) {
    const auto f = ade::MonicPoly::parse(poly, degree);
    std::cout << "f = " << f.str() << "\n";
    std::cout << "disc = " << ade::discriminant(f).get_str() << "\n";
}

void cmd_classify(const std::string& poly, int degree, long p, const std::string& engine,
                  long long budget) {
    const auto f = ade::MonicPoly::parse(poly, degree);
    ade::ClassifyEngine eng;
    if (engine == "fast") eng = ade::ClassifyEngine::FAST;
    else if (engine == "brute") eng = ade::ClassifyEngine::BRUTE;
    else if (engine == "both") eng = ade::ClassifyEngine::BOTH;
    else throw std::invalid_argument("engine must be fast, brute, or both");
    const auto out = ade::classify(f, p, eng, budget);
    std::cout << "f = " << f.str() << "\n";
    std::cout << "disc = " << ade::discriminant(f).get_str() << "\n";
    std::cout << "p = " << p << "\n";
    std::cout << "type = " << ade::to_string(out.type) << "\n";
    if (out.fastPathOnly) std::cout << "note: brute cross-check skipped (over budget)\n";
}

void cmd_construct(const std::string& poly, int degree, long m, const std::string& jsonPath) {
    const auto f = ade::MonicPoly::parse(poly, degree);
    const auto res = ade::sigma_m(f, m);
    std::cout << "f = " << f.str() << "\n";
    std::cout << "m = " << m << "\n";
    std::cout << "shift = " << res.shift << "\n";
    std::cout << "matrix:\n" << res.matrix.csv();
    std::cout << "superdiagonal:";
    for (const auto& x : res.superdiagonal) std::cout << " " << ade::rat_str(x);
    std::cout << "\n";
    std::cout << "integral: " << (res.strictlyIntegral ? "yes" : "no")
              << " (max denominator " << res.maxDenominator << ")\n";
    std::cout << "q literal = " << ade::rat_str(res.qLiteral) << "\n";
    std::cout << "q orbit = " << ade::rat_str(res.qOrbit) << "\n";
    if (!jsonPath.empty()) {
        ade::write_file_atomic(jsonPath, res.matrix.to_json());
        std::cout << "wrote " << jsonPath << "\n";
    }
}

void cmd_local_density(const std::string& family, long p, const std::string& method,
                       long long samples, std::uint64_t seed, long long fibreBudget) {
    const auto fam = ade::family_by_name(family);
    ade::DensityMethod m;
    if (method == "exact") m = ade::DensityMethod::EXACT;
    else if (method == "exact2") m = ade::DensityMethod::EXACT2;
    else if (method == "mc") m = ade::DensityMethod::MC;
    else throw std::invalid_argument("method must be exact, exact2, or mc");
    const auto d = ade::local_density(fam, p, m, fibreBudget, samples, seed);
    std::cout << "family: " << fam.name << "\n";
    std::cout << "p: " << p << "\n";
    std::cout << "method: " << method << (d.fromCache ? " (cached)" : "") << "\n";
    std::cout << "rho: " << ade::rat_str(d.rho) << " = " << d.estimate << "\n";
    if (m == ade::DensityMethod::MC)
        std::cout << "se: " << d.se << "  samples: " << d.samples << "  seed: " << d.seed
                  << "\n";
}

void cmd_sieve(const std::string& family, long X, int threads, const std::string& tail,
               const std::string& engine) {
    const auto fam = ade::family_by_name(family);
    if (!tail.empty()) {
        std::vector<long> Ms;
        std::stringstream ss(tail);
        std::string tok;
        while (std::getline(ss, tok, ',')) Ms.push_back(std::stol(tok));
        const auto grid = ade::tail_counts_grid(fam, X, Ms, threads);
        std::cout << "family: " << fam.name << "  X: " << X << "  points: "
                  << grid.front().total.get_str() << "\n";
        std::cout << "M  strong  weak\n";
        for (const auto& tc : grid)
            std::cout << tc.M << "  " << tc.strongCount.get_str() << "  "
                      << tc.weakCount.get_str() << "\n";
        return;
    }
    ade::SieveCounts counts;
    if (engine == "auto") counts = ade::empirical_density(fam, X, threads);
    else if (engine == "rowsieve") counts = ade::empirical_density_rowsieve(fam, X, threads);
    else if (engine == "perpoint") counts = ade::empirical_density_perpoint(fam, X, threads);
    else throw std::invalid_argument("engine must be auto, rowsieve, or perpoint");
    std::cout << "family: " << fam.name << "\n";
    std::cout << "X: " << X << "\n";
    std::cout << "total: " << counts.total.get_str() << "\n";
    std::cout << "squarefree: " << counts.squarefree.get_str() << "\n";
    std::cout << "zero-disc: " << counts.zeroDisc.get_str() << "\n";
    std::cout << "uncertain: " << counts.uncertain.get_str() << "\n";
    std::cout << "ratio: " << counts.ratio() << "\n";
    if (counts.inconclusive) {
        std::cout << "inconclusive: uncertain points exceed 0.1% of the box\n";
        exitCode = 1;
    }
}

void cmd_compare(const std::string& family, long pMax, long X, std::uint64_t seed,
                 long long samples, int threads, long exactMaxP, const std::string& outPath,
                 const std::string& csvPath) {
    const auto fam = ade::family_by_name(family);
    const auto rep = ade::compare(fam, pMax, X, seed, samples, threads, exactMaxP);
    std::cout << "p  method  rho  estimate  se\n";
    for (const auto& d : rep.perPrime)
        std::cout << d.p << "  " << d.method << "  " << d.rho << "  " << d.estimate << "  "
                  << d.se << "\n";
    std::cout << rep.summary() << "\n";
    if (!outPath.empty()) {
        ade::write_file_atomic(outPath, rep.to_json());
        std::cout << "wrote " << outPath << "\n";
    }
    if (!csvPath.empty()) {
        ade::write_file_atomic(csvPath, rep.to_csv());
        std::cout << "wrote " << csvPath << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ade: squarefree-discriminant statistics for ADE coefficient families"};
    app.name("ade");  // stable usage line regardless of the invocation path
    app.require_subcommand(1);
    app.set_version_flag("--version", "ade 1.0.0");

    // roots
    std::string rootsType;
    auto* roots = app.add_subcommand("roots", "Print a root system in simple-root coordinates");
    roots->add_option("type", rootsType, "Dynkin label, e.g. A2, D5, E7")->required();
    roots->callback([&] { cmd_roots(rootsType); });

    // grade
    std::string gradeType;
    auto* grade = app.add_subcommand("grade", "Dimension bookkeeping of the graded pair");
    grade->add_option("type", gradeType, "Dynkin label")->required();
    grade->callback([&] { cmd_grade(gradeType); });

    // verify-case
    std::string vcName, vcJson;
    bool vcAll = false;
    auto* vc = app.add_subcommand("verify-case",
                                  "Check a shipped case table field by field and run the "
                                  "integration pipeline");
    vc->add_option("name", vcName, "Case name (D4..D7, E6, E7, E8)");
    vc->add_flag("--all", vcAll, "Verify every shipped case");
    vc->add_option("--json", vcJson, "Write the report(s) to this file");
    vc->callback([&] { cmd_verify_case(vcName, vcAll, vcJson); });

    // lambda
    std::string lambdaType;
    auto* lambda = app.add_subcommand("lambda", "Exponent solution and its zeta product");
    lambda->add_option("type", lambdaType, "Dynkin label")->required();
    lambda->callback([&] { cmd_lambda(lambdaType); });

    // zeta
    std::vector<double> zetaArgs;
    auto* zetaCmd = app.add_subcommand("zeta", "Riemann zeta values (s > 1)");
    zetaCmd->add_option("s", zetaArgs, "Arguments")->required();
    zetaCmd->callback([&] { cmd_zeta(zetaArgs); });

    // disc
    std::string discPoly;
    int discDegree = 0;
    auto* disc = app.add_subcommand("disc", "Discriminant of a monic integer polynomial");
    disc->add_option("--poly", discPoly, "Comma-separated coefficients b1..bd")->required();
    disc->add_option("--degree", discDegree, "Left-pad the coefficient list to this degree");
    disc->callback([&] { cmd_disc(discPoly, discDegree); });

    // classify
    std::string clPoly, clEngine = "both";
    int clDegree = 0;
    long clP = 0;
    long long clBudget = 10'000'000;
    auto* cl = app.add_subcommand("classify",
                                  "How p^2 divides the discriminant across perturbations");
    cl->add_option("--poly", clPoly, "Comma-separated coefficients")->required();
    cl->add_option("--degree", clDegree, "Left-pad to this degree");
    cl->add_option("--p", clP, "Prime modulus")->required();
    cl->add_option("--engine", clEngine, "fast | brute | both (default both)");
    cl->add_option("--budget", clBudget, "Perturbation budget for the brute engine");
    cl->callback([&] { cmd_classify(clPoly, clDegree, clP, clEngine, clBudget); });

    // construct
    std::string coPoly, coJson;
    int coDegree = 0;
    long coM = 0;
    auto* co = app.add_subcommand("construct",
                                  "Multiplication representative with checked invariants");
    co->add_option("--poly", coPoly, "Comma-separated coefficients")->required();
    co->add_option("--degree", coDegree, "Left-pad to this degree");
    co->add_option("--m", coM, "Multiplier")->required();
    co->add_option("--json", coJson, "Write the matrix to this file");
    co->callback([&] { cmd_construct(coPoly, coDegree, coM, coJson); });

    // local-density
    std::string ldFamily, ldMethod = "exact";
    long ldP = 0;
    long long ldSamples = 100'000, ldBudget = 100'000'000;
    std::uint64_t ldSeed = 0;
    auto* ld = app.add_subcommand("local-density",
                                  "Density of coefficient fibres mod p^2 with p^2-free "
                                  "discriminant");
    ld->add_option("--family", ldFamily, "A2 | A4 | const1")->required();
    ld->add_option("--p", ldP, "Prime")->required();
    ld->add_option("--method", ldMethod, "exact | exact2 | mc (default exact)");
    ld->add_option("--samples", ldSamples, "Monte-Carlo sample count");
    ld->add_option("--seed", ldSeed, "Monte-Carlo seed");
    ld->add_option("--fibre-budget", ldBudget, "Refusal threshold for exact enumeration");
    ld->callback([&] { cmd_local_density(ldFamily, ldP, ldMethod, ldSamples, ldSeed, ldBudget); });

    // sieve
    std::string svFamily, svTail, svEngine = "auto";
    long svX = 0;
    int svThreads = 1;
    auto* sv = app.add_subcommand("sieve", "Count squarefree discriminants over the box");
    sv->add_option("--family", svFamily, "A2 | A4 | const1")->required();
    sv->add_option("--X", svX, "Box height")->required();
    sv->add_option("--threads", svThreads, "Worker threads");
    sv->add_option("--tail", svTail,
                   "Comma-separated thresholds M: classify points with p^2 | disc for p > M");
    sv->add_option("--engine", svEngine, "auto | rowsieve | perpoint (default auto)");
    sv->callback([&] { cmd_sieve(svFamily, svX, svThreads, svTail, svEngine); });

    // compare
    std::string cpFamily, cpOut, cpCsv;
    long cpPMax = 0, cpX = 0, cpExactMaxP = 13;
    long long cpSamples = 100'000;
    std::uint64_t cpSeed = 0;
    int cpThreads = 1;
    auto* cp = app.add_subcommand("compare",
                                  "Truncated local-density product against the box count");
    cp->add_option("--family", cpFamily, "A2 | A4 | const1")->required();
    cp->add_option("--pmax", cpPMax, "Largest prime in the truncated product")->required();
    cp->add_option("--X", cpX, "Box height")->required();
    cp->add_option("--seed", cpSeed, "Base seed for Monte-Carlo densities");
    cp->add_option("--samples", cpSamples, "Monte-Carlo samples per prime");
    cp->add_option("--threads", cpThreads, "Worker threads");
    cp->add_option("--exact-max-p", cpExactMaxP, "Largest prime computed exactly");
    cp->add_option("--out", cpOut, "Write the JSON report to this file");
    cp->add_option("--csv", cpCsv, "Write the per-prime CSV table to this file");
    cp->callback([&] {
        cmd_compare(cpFamily, cpPMax, cpX, cpSeed, cpSamples, cpThreads, cpExactMaxP, cpOut,
                    cpCsv);
    });

    try {
        app.parse(argc, argv);
        return exitCode;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
