#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psalg/brackets.hpp"
#include "psalg/models.hpp"
#include "psalg/parser.hpp"
#include "psalg/render.hpp"
#include "psalg/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

void writeOut(const std::string& text, const std::string& outFile) {
    if (outFile.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream f(outFile);
        if (!f) throw psalg::Error("cannot open output file: " + outFile);
        f << text;
        if (!text.empty() && text.back() != '\n') f << '\n';
    }
}

// "x1=3/5,p1=1" -> evaluation point.
psalg::EvalPoint parsePoint(const std::string& text, const psalg::Context& ctx,
                            const std::string& hbarText) {
    psalg::EvalPoint pt;
    pt.hbarVal = psalg::rationalFromString(hbarText);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw psalg::Error("bad assignment '" + item + "' (expected var=value)");
        std::string name = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        // Trim blanks.
        auto trim = [](std::string& s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        };
        trim(name);
        trim(value);
        if (name.size() < 2 || (name[0] != 'x' && name[0] != 'p'))
            throw psalg::Error("unknown variable '" + name + "'");
        int index = std::stoi(name.substr(1));
        psalg::Var v = name[0] == 'x' ? psalg::Var::x(index) : psalg::Var::p(index);
        psalg::requireVar(ctx, v);
        pt.values[v] = psalg::rationalFromString(value);
    }
    return pt;
}

std::string gaussianString(const psalg::GaussianRational& g) {
    if (g.im == 0) return g.re.get_str();
    std::string im = g.im.get_str();
    if (g.re == 0) return im + "*i";
    return g.re.get_str() + (g.im > 0 ? " + " + im : " - " + psalg::Rational(-g.im).get_str()) +
           "*i";
}

int runVerify(const std::string& suite, int n, std::uint64_t seed, int degX, int degP,
              bool allowS, bool json, bool timings, const std::string& outFile) {
    psalg::RandomExprPolicy policy;
    policy.seed = seed;
    policy.maxDegX = degX;
    policy.maxDegP = degP;
    policy.allowS = allowS;
    psalg::SuiteReport report = psalg::runSuite(suite, n, policy);
    writeOut(json ? psalg::renderReportJson(report, timings)
                  : psalg::renderReportText(report, timings),
             outFile);
    return report.passed() ? kExitOk : kExitVerificationFailure;
}

int runBracket(const std::string& kind, int n, const std::vector<std::string>& exprTexts,
               bool json, const std::string& outFile) {
    psalg::Context ctx(n);
    std::vector<psalg::PhaseExpr> exprs;
    for (const auto& t : exprTexts) exprs.push_back(psalg::parse(t, ctx));

    psalg::BracketSpec spec;
    spec.kind = [&] {
        if (kind == "pb") return psalg::BracketKind::PB;
        if (kind == "star") return psalg::BracketKind::STAR;
        if (kind == "mb") return psalg::BracketKind::MB;
        if (kind == "cnb") return psalg::BracketKind::CNB;
        if (kind == "qnb") return psalg::BracketKind::QNB;
        if (kind == "db") return psalg::BracketKind::DB;
        if (kind == "trace") return psalg::BracketKind::TRACE;
        throw psalg::Error("unknown bracket kind: " + kind);
    }();
    if (spec.kind == psalg::BracketKind::DB) {
        if (exprs.size() < 4)
            throw psalg::Error("db needs two principal expressions plus constraints");
        spec.args.assign(exprs.begin(), exprs.begin() + 2);
        spec.constraints.assign(exprs.begin() + 2, exprs.end());
    } else {
        spec.args = exprs;
    }
    psalg::PhaseExpr result = psalg::evalBracket(spec);
    writeOut(json ? psalg::renderJson(result) : psalg::renderText(result), outFile);
    return kExitOk;
}

int runCorrection(int n, bool json, const std::string& outFile) {
    // quantumCorrection proves the closed form internally; a mismatch throws.
    psalg::PhaseExpr corr = psalg::quantumCorrection(n);
    if (json) {
        nlohmann::json j;
        j["schemaVersion"] = 1;
        j["n"] = n;
        j["correction"] = nlohmann::json::parse(psalg::renderJson(corr));
        j["text"] = psalg::renderText(corr);
        writeOut(j.dump(2), outFile);
    } else {
        writeOut(psalg::renderText(corr), outFile);
    }
    return kExitOk;
}

int runSpectrum(int n, int lmax, bool json, const std::string& outFile) {
    auto spec = psalg::casimirSpectrum(n, lmax);
    if (json) {
        nlohmann::json j;
        j["schemaVersion"] = 1;
        j["n"] = n;
        nlohmann::json levels = nlohmann::json::array();
        for (const auto& [l, e] : spec)
            levels.push_back({{"l", l}, {"E", psalg::renderText(e)}});
        j["levels"] = levels;
        writeOut(j.dump(2), outFile);
    } else {
        std::ostringstream out;
        for (const auto& [l, e] : spec) out << "l=" << l << " E=" << psalg::renderText(e) << "\n";
        writeOut(out.str(), outFile);
    }
    return kExitOk;
}

int runEval(int n, const std::string& exprText, const std::string& atText,
            const std::string& hbarText, bool useFloat, bool json, const std::string& outFile) {
    psalg::Context ctx(n);
    psalg::PhaseExpr expr = psalg::parse(exprText, ctx);
    psalg::EvalPoint pt = parsePoint(atText, ctx, hbarText);
    std::string rendered;
    if (useFloat) {
        std::complex<double> v = expr.evalFloat(pt);
        std::ostringstream out;
        out.precision(17);
        out << v.real();
        if (v.imag() != 0.0) out << (v.imag() > 0 ? " + " : " - ") << std::abs(v.imag()) << "*i";
        rendered = out.str();
    } else {
        rendered = gaussianString(expr.evalExact(pt));
    }
    if (json) {
        nlohmann::json j;
        j["schemaVersion"] = 1;
        j["value"] = rendered;
        writeOut(j.dump(2), outFile);
    } else {
        writeOut(rendered, outFile);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact symbolic phase-space algebra: star products, Poisson/Moyal brackets, "
                 "Nambu brackets, and sphere/chiral sigma-model verification suites"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run a named identity suite");
    std::string suiteName;
    int verifyN = 2;
    std::uint64_t seed = psalg::RandomExprPolicy{}.seed;
    int degX = psalg::RandomExprPolicy{}.maxDegX;
    int degP = psalg::RandomExprPolicy{}.maxDegP;
    bool allowS = false;
    bool verifyJson = false, verifyTimings = false;
    std::string verifyOut;
    verify->add_option("--suite", suiteName, "suite name (see --list)")->required();
    verify->add_option("--n", verifyN, "manifold dimension for dimension-generic suites");
    verify->add_option("--seed", seed, "random-expression seed");
    verify->add_option("--degree", degX, "max x-degree of random test functions");
    verify->add_option("--degp", degP, "max momentum degree of random test functions");
    verify->add_flag("--allow-s", allowS, "let random test functions carry s");
    verify->add_flag("--json", verifyJson, "emit a structured report");
    verify->add_flag("--timings", verifyTimings, "include wall-clock timings in the report");
    verify->add_option("--out", verifyOut, "write the report to a file");

    auto* list = app.add_subcommand("suites", "list available suites");

    // bracket
    auto* bracket = app.add_subcommand("bracket", "evaluate a bracket of parsed expressions");
    std::string kind;
    int bracketN = 2;
    std::vector<std::string> exprTexts;
    bool bracketJson = false;
    std::string bracketOut;
    bracket->add_option("--kind", kind, "pb|star|mb|cnb|qnb|db|trace")->required();
    bracket->add_option("--n", bracketN, "manifold dimension")->required();
    bracket
        ->add_option("--expr", exprTexts,
                     "expression (repeatable; for db the first two are principal and the rest "
                     "are constraints)")
        ->required();
    bracket->add_flag("--json", bracketJson, "emit the structured expression form");
    bracket->add_option("--out", bracketOut, "write the result to a file");

    // correction
    auto* correction = app.add_subcommand("correction", "quantum correction H_qm - H for S^n");
    int corrN = 2;
    bool corrJson = false;
    std::string corrOut;
    correction->add_option("--n", corrN, "manifold dimension")->required();
    correction->add_flag("--json", corrJson, "emit structured output");
    correction->add_option("--out", corrOut, "write the result to a file");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Casimir energy levels for S^n");
    int specN = 2, lmax = 3;
    bool specJson = false;
    std::string specOut;
    spectrum->add_option("--n", specN, "manifold dimension")->required();
    spectrum->add_option("--lmax", lmax, "largest level")->required();
    spectrum->add_flag("--json", specJson, "emit structured output");
    spectrum->add_option("--out", specOut, "write the result to a file");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate an expression at a rational point");
    int evalN = 2;
    std::string evalExpr, atText, hbarText = "1";
    bool useFloat = false, evalJson = false;
    std::string evalOut;
    eval->add_option("--n", evalN, "manifold dimension")->required();
    eval->add_option("--expr", evalExpr, "expression to evaluate")->required();
    eval->add_option("--at", atText, "comma-separated assignments, e.g. \"x1=3/5,p1=1\"; "
                                     "unlisted variables default to 0");
    eval->add_option("--hbar", hbarText, "rational value for hbar (default 1)");
    eval->add_flag("--float", useFloat, "evaluate in double precision");
    eval->add_flag("--json", evalJson, "emit structured output");
    eval->add_option("--out", evalOut, "write the result to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify)
            return runVerify(suiteName, verifyN, seed, degX, degP, allowS, verifyJson,
                             verifyTimings, verifyOut);
        if (*list) {
            for (const auto& name : psalg::suiteNames()) std::cout << name << "\n";
            return kExitOk;
        }
        if (*bracket) return runBracket(kind, bracketN, exprTexts, bracketJson, bracketOut);
        if (*correction) return runCorrection(corrN, corrJson, corrOut);
        if (*spectrum) return runSpectrum(specN, lmax, specJson, specOut);
        if (*eval) return runEval(evalN, evalExpr, atText, hbarText, useFloat, evalJson, evalOut);
    } catch (const psalg::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const psalg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
