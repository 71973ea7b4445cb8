#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "algebraic.hpp"
#include "errors.hpp"
#include "immersion.hpp"

namespace tori {

using json = nlohmann::json;

enum class ScalarMode { rational, algebraic, floating };

// In-memory form of a certificate file. Exact data lives in Qx/wx (rationals are
// AlgebraicNumbers without a field); floating data in Qd/wd. General certificates
// carry the coefficient operator in gram.
struct Certificate {
    std::string kind = "homogeneous";
    int n = 0, N = 0;
    IntMatrix Y;
    ScalarMode mode = ScalarMode::rational;
    SymMatrix<AlgebraicNumber> Qx;
    std::vector<AlgebraicNumber> wx;
    SymMatrix<double> Qd;
    std::vector<double> wd;
    GramOperator gram;
    json metadata = json::object();

    bool exact() const { return mode != ScalarMode::floating; }
    bool homogeneous() const { return kind == "homogeneous"; }

    SymMatrix<double> Q_double() const { return exact() ? to_double(Qx) : Qd; }

    MatrixData<AlgebraicNumber> exact_data() const
    {
        if (!exact() || !homogeneous())
            throw Error("certificate has no exact homogeneous data");
        return MatrixData<AlgebraicNumber>{n, N, Qx, Y, wx};
    }

    MatrixData<double> double_data() const
    {
        if (!homogeneous())
            throw Error("general certificate has no weights");
        if (exact())
            return cast_data<double>(exact_data());
        return MatrixData<double>{n, N, Qd, Y, wd};
    }
};

// ---------------------------------------------------------------- scalars

inline std::string format_double(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

inline bool is_decimal_text(const std::string& s) { return s.find_first_of(".eE") != std::string::npos; }

inline double parse_double(const std::string& s)
{
    double v = 0;
    const char* b = s.data();
    if (!s.empty() && s[0] == '+')
        ++b;
    auto res = std::from_chars(b, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("bad decimal: " + s);
    return v;
}

inline json encode_scalar(const AlgebraicNumber& x)
{
    if (x.is_rational())
        return format_rational(x.rational_value());
    const auto& f = *x.field();
    json mp = json::array();
    for (const auto& c : f.minpoly())
        mp.push_back(c.get_str());
    json co = json::array();
    for (const auto& c : x.coefficients())
        co.push_back(format_rational(c));
    return json{{"minpoly", mp}, {"interval", json::array({format_rational(f.lo()), format_rational(f.hi())})}, {"coeffs", co}};
}

inline json encode_scalar(const Rational& x) { return format_rational(x); }
inline json encode_scalar(double x) { return format_double(x); }

namespace detail {

class ScalarDecoder {
public:
    AlgebraicNumber exact(const json& j)
    {
        if (j.is_string())
            return AlgebraicNumber(parse_rational(j.get<std::string>()));
        if (j.is_number_integer())
            return AlgebraicNumber(Rational(Integer(j.dump())));
        if (!j.is_object())
            throw ParseError("scalar must be a string or an algebraic object");
        const auto& mp = j.at("minpoly");
        const auto& iv = j.at("interval");
        const auto& co = j.at("coeffs");
        if (!mp.is_array() || !iv.is_array() || iv.size() != 2 || !co.is_array())
            throw ParseError("malformed algebraic scalar");
        IntPoly f;
        for (const auto& c : mp)
            f.push_back(Integer(c.is_string() ? c.get<std::string>() : c.dump()));
        Rational lo = parse_rational(iv[0].get<std::string>()), hi = parse_rational(iv[1].get<std::string>());
        std::string key = mp.dump() + iv.dump();
        FieldPtr field;
        if (auto it = fields_.find(key); it != fields_.end())
            field = it->second;
        else {
            try {
                field = std::make_shared<NumberField>(f, lo, hi);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError(std::string("invalid number field: ") + e.what());
            }
            fields_[key] = field;
        }
        RatPoly c;
        for (const auto& x : co)
            c.push_back(parse_rational(x.get<std::string>()));
        return AlgebraicNumber(field, c);
    }

    double floating(const json& j)
    {
        if (j.is_string()) {
            auto s = j.get<std::string>();
            if (is_decimal_text(s))
                return parse_double(s);
            return to_double(parse_rational(s));
        }
        if (j.is_number())
            return j.get<double>();
        return exact(j).to_double();
    }

private:
    std::map<std::string, FieldPtr> fields_;
};

inline void scan_mode(const json& j, bool& decimal, bool& algebraic)
{
    if (j.is_string())
        decimal = decimal || is_decimal_text(j.get<std::string>());
    else if (j.is_number_float())
        decimal = true;
    else if (j.is_object())
        algebraic = true;
    else if (j.is_array())
        for (const auto& x : j)
            scan_mode(x, decimal, algebraic);
}

} // namespace detail

// ---------------------------------------------------------------- emit

inline json certificate_to_json(const Certificate& c)
{
    json j;
    j["format_version"] = 1;
    j["kind"] = c.kind;
    j["n"] = c.n;
    j["N"] = c.N;
    json Q = json::array();
    for (int i = 0; i < c.n; ++i) {
        json row = json::array();
        for (int k = 0; k < c.n; ++k)
            row.push_back(c.exact() ? encode_scalar(c.Qx(i, k)) : encode_scalar(c.Qd(i, k)));
        Q.push_back(row);
    }
    j["Q"] = Q;
    json Y = json::array();
    for (int r = 0; r < c.Y.cols(); ++r) {
        json col = json::array();
        for (int i = 0; i < c.Y.rows(); ++i)
            col.push_back(c.Y(i, r));
        Y.push_back(col);
    }
    j["Y"] = Y;
    if (c.homogeneous()) {
        json w = json::array();
        for (int r = 0; r < c.N; ++r)
            w.push_back(c.exact() ? encode_scalar(c.wx[r]) : encode_scalar(c.wd[r]));
        j["weights"] = w;
    } else {
        json diag = json::array(), off = json::array();
        for (int r = 0; r < c.N; ++r)
            diag.push_back(format_double(c.gram.diagonal_value(r)));
        for (int r = 0; r < c.N; ++r)
            for (int s = r + 1; s < c.N; ++s) {
                Eigen::Matrix2d B = c.gram.block(r, s);
                if (B.isZero(0))
                    continue;
                off.push_back({{"r", r + 1},
                               {"s", s + 1},
                               {"block", json::array({json::array({format_double(B(0, 0)), format_double(B(0, 1))}),
                                                      json::array({format_double(B(1, 0)), format_double(B(1, 1))})})}});
            }
        j["blocks"] = {{"diagonal", diag}, {"offdiagonal", off}};
    }
    j["metadata"] = c.metadata;
    return j;
}

inline std::string emit_certificate(const Certificate& c) { return certificate_to_json(c).dump(2) + "\n"; }

// ---------------------------------------------------------------- parse

inline Certificate certificate_from_json(const json& j)
{
    try {
        if (!j.is_object())
            throw ParseError("certificate must be a JSON object");
        if (j.at("format_version").get<int>() != 1)
            throw ParseError("unsupported format_version");
        Certificate c;
        c.kind = j.at("kind").get<std::string>();
        if (c.kind != "homogeneous" && c.kind != "general")
            throw ParseError("kind must be homogeneous or general");
        c.n = j.at("n").get<int>();
        c.N = j.at("N").get<int>();
        if (c.n < 1 || c.N < 1)
            throw ParseError("n and N must be positive");
        const auto& Qj = j.at("Q");
        const auto& Yj = j.at("Y");
        if (!Qj.is_array() || static_cast<int>(Qj.size()) != c.n)
            throw ParseError("Q must be an n x n array");
        for (const auto& row : Qj)
            if (!row.is_array() || static_cast<int>(row.size()) != c.n)
                throw ParseError("Q must be an n x n array");
        if (!Yj.is_array() || static_cast<int>(Yj.size()) != c.N)
            throw ParseError("Y must list N columns");
        c.Y = IntMatrix(c.n, c.N);
        for (int r = 0; r < c.N; ++r) {
            if (!Yj[r].is_array() || static_cast<int>(Yj[r].size()) != c.n)
                throw ParseError("each column of Y needs n entries");
            for (int i = 0; i < c.n; ++i)
                c.Y(i, r) = Yj[r][i].get<long long>();
        }
        bool decimal = false, algebraic = false;
        detail::scan_mode(Qj, decimal, algebraic);
        const json* wj = nullptr;
        if (c.homogeneous()) {
            wj = &j.at("weights");
            if (!wj->is_array() || static_cast<int>(wj->size()) != c.N)
                throw ParseError("weights must have N entries");
            detail::scan_mode(*wj, decimal, algebraic);
        }
        c.mode = decimal ? ScalarMode::floating : (algebraic ? ScalarMode::algebraic : ScalarMode::rational);
        detail::ScalarDecoder dec;
        if (c.exact()) {
            c.Qx = SymMatrix<AlgebraicNumber>(c.n);
            for (int i = 0; i < c.n; ++i)
                for (int k = 0; k < c.n; ++k) {
                    auto v = dec.exact(Qj[i][k]);
                    if (k < i) {
                        if (v != c.Qx(k, i))
                            throw ParseError("Q is not symmetric");
                    } else
                        c.Qx.set(i, k, v);
                }
        } else {
            c.Qd = SymMatrix<double>(c.n);
            for (int i = 0; i < c.n; ++i)
                for (int k = 0; k < c.n; ++k) {
                    double v = dec.floating(Qj[i][k]);
                    if (k < i) {
                        if (v != c.Qd(k, i))
                            throw ParseError("Q is not symmetric");
                    } else
                        c.Qd.set(i, k, v);
                }
        }
        if (c.homogeneous()) {
            for (const auto& w : *wj) {
                if (c.exact())
                    c.wx.push_back(dec.exact(w));
                else
                    c.wd.push_back(dec.floating(w));
            }
        } else {
            const auto& b = j.at("blocks");
            const auto& diag = b.at("diagonal");
            if (!diag.is_array() || static_cast<int>(diag.size()) != c.N)
                throw ParseError("blocks.diagonal must have N entries");
            c.gram = GramOperator(c.N);
            for (int r = 0; r < c.N; ++r)
                c.gram.set_diagonal(r, dec.floating(diag[r]));
            for (const auto& o : b.at("offdiagonal")) {
                int r = o.at("r").get<int>() - 1, s = o.at("s").get<int>() - 1;
                if (r < 0 || s < 0 || r >= c.N || s >= c.N || r == s)
                    throw ParseError("block index out of range");
                const auto& B = o.at("block");
                if (!B.is_array() || B.size() != 2 || B[0].size() != 2 || B[1].size() != 2)
                    throw ParseError("blocks are 2 x 2");
                Eigen::Matrix2d M;
                M << dec.floating(B[0][0]), dec.floating(B[0][1]), dec.floating(B[1][0]), dec.floating(B[1][1]);
                c.gram.set_block(r, s, M);
            }
        }
        if (j.contains("metadata"))
            c.metadata = j.at("metadata");
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed certificate: ") + e.what());
    }
}

inline Certificate parse_certificate(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return certificate_from_json(j);
}

// ---------------------------------------------------------------- builders

inline Certificate make_certificate(const MatrixData<AlgebraicNumber>& d, json metadata = json::object())
{
    Certificate c;
    c.n = d.n;
    c.N = d.N;
    c.Y = d.Y;
    c.Qx = d.Q;
    c.wx = d.weights;
    bool alg = false;
    for (int i = 0; i < d.n; ++i)
        for (int k = i; k < d.n; ++k)
            alg = alg || !d.Q(i, k).is_rational();
    for (const auto& w : d.weights)
        alg = alg || !w.is_rational();
    c.mode = alg ? ScalarMode::algebraic : ScalarMode::rational;
    c.metadata = std::move(metadata);
    return c;
}

inline Certificate make_certificate(const MatrixData<Rational>& d, json metadata = json::object())
{
    return make_certificate(cast_data<AlgebraicNumber>(d), std::move(metadata));
}

inline Certificate make_certificate(const MatrixData<double>& d, json metadata = json::object())
{
    Certificate c;
    c.n = d.n;
    c.N = d.N;
    c.Y = d.Y;
    c.Qd = d.Q;
    c.wd = d.weights;
    c.mode = ScalarMode::floating;
    c.metadata = std::move(metadata);
    return c;
}

// Q is stored exactly when given exactly; the operator is floating.
inline Certificate make_general_certificate(const GramOperator& g, const SymMatrix<Rational>& Q, const IntMatrix& Y, json metadata = json::object())
{
    Certificate c;
    c.kind = "general";
    c.n = Q.n();
    c.N = g.N();
    c.Y = Y;
    c.Qx = Q.cast<AlgebraicNumber>();
    c.mode = ScalarMode::rational;
    c.gram = g;
    c.metadata = std::move(metadata);
    return c;
}

// ---------------------------------------------------------------- verification

inline VerificationReport verify_certificate(const Certificate& c, double tol = 1e-10)
{
    if (!c.homogeneous())
        return verify_full(c.gram, c.Q_double(), c.Y, tol);
    if (c.exact())
        return verify_matrix_data(c.exact_data(), tol);
    return verify_matrix_data(c.double_data(), tol);
}

inline json report_to_json(const VerificationReport& r)
{
    json j;
    j["verdict"] = verdict_name(r.verdict);
    j["reason"] = r.reason;
    j["tolerance"] = format_double(r.tolerance);
    j["exact"] = r.exact;
    json res = json::array();
    for (const auto& x : r.residuals)
        res.push_back({{"equation", x.equation}, {"key", x.key}, {"value", format_double(x.value)}, {"exact_zero", x.exact_zero}});
    j["residuals"] = res;
    j["max_residual"] = format_double(r.max_residual());
    if (r.psd_margin)
        j["psd_margin"] = format_double(*r.psd_margin);
    return j;
}

} // namespace tori
