#include "psalg/render.hpp"

#include <sstream>

#include <json.hpp>

namespace psalg {

namespace {

// "3", "-3", "3/4" for standalone use; multiplying context parenthesizes.
std::string ratString(const Rational& q) { return q.get_str(); }

bool needsParens(const Rational& q) { return q.get_den() != 1 || q < 0; }

// Renders |coeff| * monomial; the sign is handled by the term joiner.
std::string termString(const GaussianRational& coeff, const Monomial& m, const Context& ctx) {
    std::string out;
    auto appendFactor = [&](const std::string& f) {
        if (!out.empty()) out += "*";
        out += f;
    };

    // Coefficient part.
    const bool pureReal = coeff.im == 0;
    const bool pureImag = coeff.re == 0 && coeff.im != 0;
    bool suppressUnit = false;
    if (pureReal) {
        if (coeff.re == 1 && !m.isUnit()) {
            suppressUnit = true;
        } else {
            out = needsParens(coeff.re) && !m.isUnit() ? "(" + ratString(coeff.re) + ")"
                                                       : ratString(coeff.re);
        }
    } else if (pureImag) {
        if (coeff.im == 1) {
            out = "i";
        } else if (coeff.im == -1) {
            out = "-i";
        } else {
            out = (needsParens(coeff.im) ? "(" + ratString(coeff.im) + ")" : ratString(coeff.im)) +
                  "*i";
        }
    } else {
        // Mixed complex coefficient, always parenthesized.
        std::string imPart;
        Rational imAbs = coeff.im < 0 ? Rational(-coeff.im) : coeff.im;
        if (imAbs == 1)
            imPart = "i";
        else
            imPart = (needsParens(imAbs) ? "(" + ratString(imAbs) + ")" : ratString(imAbs)) + "*i";
        out = "(" + ratString(coeff.re) + (coeff.im < 0 ? " - " : " + ") + imPart + ")";
    }

    if (m.isUnit() && !suppressUnit) return out;

    for (int a = 0; a < ctx.dim(); ++a) {
        if (m.xExp[a] == 0) continue;
        std::string f = "x" + std::to_string(a + 1);
        if (m.xExp[a] > 1) f += "^" + std::to_string(m.xExp[a]);
        appendFactor(f);
    }
    for (int a = 0; a < ctx.dim(); ++a) {
        if (m.pExp[a] == 0) continue;
        std::string f = "p" + std::to_string(a + 1);
        if (m.pExp[a] > 1) f += "^" + std::to_string(m.pExp[a]);
        appendFactor(f);
    }
    if (m.hbarExp > 0) {
        std::string f = "hbar";
        if (m.hbarExp > 1) f += "^" + std::to_string(m.hbarExp);
        appendFactor(f);
    }
    if (m.sExp > 0) appendFactor("s");
    return out;
}

std::string polyString(const Poly& p) {
    if (p.isZero()) return "0";
    const Context& ctx = p.context();
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        // Pull the sign out when the coefficient is real or purely
        // imaginary; mixed complex coefficients keep their sign inside.
        bool negative = (c.im == 0 && c.re < 0) || (c.re == 0 && c.im < 0);
        GaussianRational shown = negative ? -c : c;
        if (first) {
            out += negative ? "-" : "";
            first = false;
        } else {
            out += negative ? " - " : " + ";
        }
        out += termString(shown, m, ctx);
    }
    return out;
}

nlohmann::json polyJson(const Poly& p) {
    nlohmann::json arr = nlohmann::json::array();
    const int n = p.context().dim();
    for (const auto& [m, c] : p.terms()) {
        nlohmann::json xs = nlohmann::json::array(), ps = nlohmann::json::array();
        for (int a = 0; a < n; ++a) {
            xs.push_back(m.xExp[a]);
            ps.push_back(m.pExp[a]);
        }
        arr.push_back(nlohmann::json::array(
            {c.re.get_str(), c.im.get_str(), xs, ps, m.hbarExp, m.sExp}));
    }
    return arr;
}

} // namespace

std::string renderText(const PhaseExpr& f) {
    if (f.isZero()) return "0";
    if (f.isPolynomial()) {
        const GaussianRational& lead = f.denom().leading().second;
        if (lead.re == 1) return polyString(f.numer());
        // Constant denominator left by primitive-integer scaling.
        return "(" + polyString(f.numer()) + ") / " + polyString(f.denom());
    }
    return "(" + polyString(f.numer()) + ") / (" + polyString(f.denom()) + ")";
}

std::string renderJson(const PhaseExpr& f) {
    nlohmann::json j;
    j["numer"] = polyJson(f.numer());
    j["denom"] = polyJson(f.denom());
    return j.dump();
}

PhaseExpr phaseExprFromJson(const std::string& jsonText) {
    nlohmann::json j = nlohmann::json::parse(jsonText);
    const auto& numerArr = j.at("numer");
    const auto& denomArr = j.at("denom");
    int n = -1;
    for (const auto& arr : {&numerArr, &denomArr})
        for (const auto& term : *arr) {
            int thisN = static_cast<int>(term.at(2).size());
            if (n < 0) n = thisN;
            if (n != thisN) throw Error("inconsistent exponent array lengths in JSON");
        }
    if (n < 0) throw Error("cannot infer dimension from an empty JSON expression");
    Context ctx(n);
    auto readPoly = [&](const nlohmann::json& arr) {
        Poly p(ctx);
        for (const auto& term : arr) {
            Monomial m;
            for (int a = 0; a < n; ++a) {
                m.xExp[a] = term.at(2).at(a).get<std::int16_t>();
                m.pExp[a] = term.at(3).at(a).get<std::int16_t>();
            }
            m.hbarExp = term.at(4).get<std::int16_t>();
            m.sExp = term.at(5).get<std::int16_t>();
            GaussianRational c(rationalFromString(term.at(0).get<std::string>()),
                               rationalFromString(term.at(1).get<std::string>()));
            p.addTerm(m, c);
        }
        return p;
    };
    return PhaseExpr(readPoly(numerArr), readPoly(denomArr));
}

} // namespace psalg
