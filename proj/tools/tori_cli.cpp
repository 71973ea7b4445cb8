#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tori/tori.hpp"

using namespace tori;

namespace {

constexpr int exit_verified = 0, exit_falsified = 1, exit_indeterminate = 2, exit_usage = 64, exit_data = 65;

struct UsageError : Error {
    using Error::Error;
};

int exit_for(Verdict v)
{
    switch (v) {
    case Verdict::verified:
        return exit_verified;
    case Verdict::falsified:
        return exit_falsified;
    default:
        return exit_indeterminate;
    }
}

double default_tolerance()
{
    if (const char* s = std::getenv("TORI_TOL")) {
        try {
            double v = std::stod(s);
            if (v > 0)
                return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid TORI_TOL\n";
    }
    return 1e-10;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// whitespace separated rows; '#' starts a comment
std::vector<std::vector<std::string>> read_table(const std::string& path)
{
    std::istringstream in(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> row;
        std::string tok;
        while (ls >> tok)
            row.push_back(tok);
        if (!row.empty())
            rows.push_back(row);
    }
    if (rows.empty())
        throw ParseError(path + ": empty matrix");
    for (const auto& r : rows)
        if (r.size() != rows[0].size())
            throw ParseError(path + ": ragged matrix");
    return rows;
}

SymMatrix<Rational> read_gram(const std::string& arg)
{
    if (arg.size() > 1 && arg[0] == 'I' && arg.find_first_not_of("0123456789", 1) == std::string::npos) {
        int n = std::stoi(arg.substr(1));
        if (n < 1 || n > 8)
            throw UsageError("identity size out of range");
        return SymMatrix<Rational>::identity(n);
    }
    auto rows = read_table(arg);
    int n = static_cast<int>(rows.size());
    if (static_cast<int>(rows[0].size()) != n)
        throw ParseError(arg + ": gram matrix must be square");
    SymMatrix<Rational> Q(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational v = parse_rational(rows[i][j]);
            if (j < i) {
                if (v != Q(j, i))
                    throw ParseError(arg + ": gram matrix is not symmetric");
            } else
                Q.set(i, j, v);
        }
    return Q;
}

IntMatrix read_int_matrix(const std::string& path)
{
    auto rows = read_table(path);
    IntMatrix Y(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < Y.rows(); ++i)
        for (int j = 0; j < Y.cols(); ++j) {
            Rational v = parse_rational(rows[i][j]);
            if (v.get_den() != 1 || !v.get_num().fits_slong_p())
                throw ParseError(path + ": Y entries must be integers");
            Y(i, j) = v.get_num().get_si();
        }
    return Y;
}

void write_output(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << text))
        throw Error("cannot write " + out);
}

// summary goes to stderr when the certificate itself goes to stdout
std::ostream& summary_stream(const std::string& out) { return (out.empty() || out == "-") ? std::cerr : std::cout; }

std::string summary_line(int N, int degree, Embedding emb, std::optional<int> index)
{
    std::ostringstream s;
    s << "N = " << N << ", sphere S^" << 2 * N - 1 << ", extension degree " << degree << ", embedding " << embedding_name(emb);
    if (index)
        s << ", eigenfunction index " << *index;
    return s.str();
}

template <class T>
std::string sym_to_string(const SymMatrix<T>& Q)
{
    std::ostringstream s;
    for (int i = 0; i < Q.n(); ++i) {
        for (int j = 0; j < Q.n(); ++j)
            s << (j ? " " : "") << Q(i, j);
        s << "\n";
    }
    return s.str();
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string path, format = "text";
    double tol = 0;
    bool exact = false, exhaustive = false;
};

int cmd_verify(const VerifyOpts& o)
{
    Certificate c = parse_certificate(read_file(o.path));
    if (o.exact && !c.exact())
        throw UsageError("--exact needs a certificate with exact scalars");
    auto rep = verify_certificate(c, o.tol);
    std::optional<EmbeddingResult> emb;
    if (rep.verified()) {
        try {
            emb = embeddedness(c.Y, o.exhaustive);
        } catch (const UnsupportedError& e) {
            std::cerr << "embedding search skipped: " << e.what() << "\n";
        }
    }
    if (o.format == "json") {
        json j = report_to_json(rep);
        j["file"] = o.path;
        j["kind"] = c.kind;
        j["n"] = c.n;
        j["N"] = c.N;
        if (emb) {
            json w = json::array();
            for (const auto& x : emb->witness)
                w.push_back(format_rational(x));
            j["embedding"] = {{"status", embedding_name(emb->status)}, {"method", emb->method}, {"witness", w}};
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << o.path << ": " << verdict_name(rep.verdict);
        if (!rep.reason.empty())
            std::cout << " (" << rep.reason << ")";
        std::cout << "\n  mode " << (rep.exact ? "exact" : "floating") << ", tolerance " << rep.tolerance << ", max residual " << rep.max_residual()
                  << "\n  n = " << c.n << ", N = " << c.N << ", sphere S^" << 2 * c.N - 1 << "\n";
        if (rep.psd_margin)
            std::cout << "  psd margin " << *rep.psd_margin << "\n";
        if (emb) {
            std::cout << "  embedding " << embedding_name(emb->status);
            if (emb->status == Embedding::unknown)
                std::cout << " (no unit minor; try --exhaustive-embedding)";
            else
                std::cout << " (" << emb->method << ")";
            if (!emb->witness.empty()) {
                std::cout << " witness u = (";
                for (std::size_t i = 0; i < emb->witness.size(); ++i)
                    std::cout << (i ? ", " : "") << emb->witness[i];
                std::cout << ")";
            }
            std::cout << "\n";
        }
    }
    return exit_for(rep.verdict);
}

// ---------------------------------------------------------------- construct

struct ConstructOpts {
    std::string out, gram, Yfile, kind = "auto", rho, rho_over_b;
    std::uint64_t seed = 1;
    int samples = 0;
    long long max_den = 60;
    std::vector<long long> triple{3, 4, 5}, mn{1, 3};
    double R1 = 0, R2 = 0, phi1 = 0, psi1 = 0, phi2 = 0, psi2 = 0;
};

int construct_rational_cmd(const ConstructOpts& o)
{
    if (o.gram.empty())
        throw UsageError("construct rational needs --gram");
    RationalPipelineConfig cfg{read_gram(o.gram), o.samples, o.seed, o.max_den};
    auto res = construct_rational(cfg);
    json meta{{"construction", "rational"}, {"seed", o.seed}, {"mu", res.mu.get_str()}, {"scale", format_rational(res.scale)}, {"eigenfunction_index", res.eigen_index}};
    write_output(emit_certificate(make_certificate(res.data, meta)), o.out);
    summary_stream(o.out) << summary_line(res.data.N, 1, embeddedness(res.data.Y).status, res.eigen_index) << ", mu = " << res.mu << "\n";
    return exit_verified;
}

int construct_pencil_cmd(const ConstructOpts& o)
{
    if (o.Yfile.empty())
        throw UsageError("construct pencil needs --Y");
    IntMatrix Y = read_int_matrix(o.Yfile);
    if (Y.rows() != 3)
        throw UsageError("pencil construction needs a 3-row Y");
    PencilKind kind;
    if (o.kind == "rank5")
        kind = PencilKind::rank5;
    else if (o.kind == "rank4")
        kind = PencilKind::rank4;
    else {
        if (rank(Y) != 3)
            throw ConstructionError("Y must have rank 3");
        int rk = sym_dim(3) - build_slice(Y).s();
        if (rk == 5)
            kind = PencilKind::rank5;
        else if (rk == 4 && Y.cols() == 4)
            kind = PencilKind::rank4;
        else
            throw ConstructionError("rank{Y_j Y_j^t} = " + std::to_string(rk) + " is not handled by the pencil construction");
    }
    auto res = construct_pencil_3torus(Y, kind);
    json mp = json::array();
    for (const auto& c : res.minpoly)
        mp.push_back(c.get_str());
    json meta{{"construction", kind == PencilKind::rank5 ? "pencil-rank5" : "rank4-lagrange"}, {"degree", res.degree}, {"minpoly", mp}};
    write_output(emit_certificate(make_certificate(res.data, meta)), o.out);
    std::optional<int> idx;
    try {
        idx = eigenfunction_index(to_double(res.data.Q), 1.0);
    } catch (const Error&) {
    }
    summary_stream(o.out) << summary_line(res.data.N, res.degree, embeddedness(res.data.Y).status, idx) << "\n";
    return exit_verified;
}

int construct_pythagorean_cmd(const ConstructOpts& o)
{
    if (o.triple.size() != 3)
        throw UsageError("--triple takes p q r");
    PythagoreanParams P;
    P.p = o.triple[0], P.q = o.triple[1], P.r = o.triple[2];
    P.R1 = o.R1, P.R2 = o.R2, P.phi1 = o.phi1, P.psi1 = o.psi1, P.phi2 = o.phi2, P.psi2 = o.psi2;
    PythagoreanFamily F;
    try {
        F = pythagorean_family(P);
    } catch (const ConstructionError&) {
        throw;
    } catch (const Error& e) {
        throw ConstructionError(e.what());
    }
    json meta{{"construction", "pythagorean"},
              {"triple", o.triple},
              {"R1", format_double(o.R1)},
              {"R2", format_double(o.R2)},
              {"phi1", format_double(o.phi1)},
              {"psi1", format_double(o.psi1)},
              {"phi2", format_double(o.phi2)},
              {"psi2", format_double(o.psi2)},
              {"homogeneous", is_homogeneous(F.gram)}};
    write_output(emit_certificate(make_general_certificate(F.gram, F.Q, F.Y, meta)), o.out);
    std::optional<int> idx;
    try {
        idx = eigenfunction_index(F.Q, Rational(1));
    } catch (const Error&) {
    }
    summary_stream(o.out) << summary_line(12, 1, Embedding::unknown, idx) << ", homogeneous " << (is_homogeneous(F.gram) ? "yes" : "no") << "\n";
    return exit_verified;
}

int construct_bryant_cmd(const ConstructOpts& o)
{
    if (o.mn.size() != 2)
        throw UsageError("--mn takes m n");
    if (o.rho.empty() == o.rho_over_b.empty())
        throw UsageError("give exactly one of --rho and --rho-over-b");
    Bryant2TorusParams P;
    if (!o.rho.empty()) {
        Rational r = parse_rational(o.rho);
        P = Bryant2TorusParams{o.mn[0], o.mn[1], r * r};
    } else
        P = Bryant2TorusParams::from_rho_over_b(o.mn[0], o.mn[1], parse_rational(o.rho_over_b));
    BryantConstruction res;
    try {
        res = bryant_2torus(P);
    } catch (const ConstructionError&) {
        throw;
    } catch (const Error& e) {
        throw ConstructionError(e.what());
    }
    json r2 = json::array();
    for (const auto& x : res.r2)
        r2.push_back(format_rational(x));
    json meta{{"construction", "bryant"}, {"mn", o.mn}, {"rho2", format_rational(P.rho2)}, {"r2", r2}};
    write_output(emit_certificate(make_certificate(res.data, meta)), o.out);
    std::optional<int> idx;
    try {
        idx = eigenfunction_index(res.data.Q, Rational(1));
    } catch (const Error&) {
    }
    summary_stream(o.out) << summary_line(res.data.N, 1, embeddedness(res.data.Y).status, idx) << "\n";
    return exit_verified;
}

// ---------------------------------------------------------------- enumerate

struct EnumerateOpts {
    std::string gram, target;
    bool shortest = false;
    int spectrum_count = 0;
    long long box = default_box_bound;
};

void print_classes(const NormClassList<Rational>& l)
{
    std::cout << "norm " << format_rational(l.target) << ": " << l.classes.size() << " classes" << (l.complete ? "" : " (incomplete)") << "\n";
    for (const auto& v : l.classes) {
        std::cout << " ";
        for (auto x : v)
            std::cout << " " << x;
        std::cout << "\n";
    }
}

int cmd_enumerate(const EnumerateOpts& o)
{
    auto Q = read_gram(o.gram);
    if (!exact_positive_definite(Q))
        throw NotPositiveDefiniteError("gram matrix is not positive definite");
    int modes = (!o.target.empty()) + (o.shortest ? 1 : 0) + (o.spectrum_count > 0 ? 1 : 0);
    if (modes != 1)
        throw UsageError("give exactly one of --target, --shortest, --spectrum");
    if (!o.target.empty()) {
        auto l = enumerate_norm(Q, parse_rational(o.target), o.box);
        print_classes(l);
        return l.complete ? exit_verified : exit_indeterminate;
    }
    if (o.shortest) {
        auto [m, l] = shortest_vectors(Q);
        print_classes(l);
        return exit_verified;
    }
    for (const auto& e : spectrum(Q, o.spectrum_count))
        std::cout << format_rational(e.norm) << " " << format_double(e.eigenvalue) << " " << e.multiplicity << "\n";
    return exit_verified;
}

// ---------------------------------------------------------------- reduce

int cmd_reduce(const std::string& path, const std::string& out, double tol)
{
    Certificate c = parse_certificate(read_file(path));
    if (!c.homogeneous())
        throw UsageError("reduce needs a homogeneous certificate");
    auto rep = verify_certificate(c, tol);
    if (!rep.verified()) {
        std::cerr << "input does not verify: " << verdict_name(rep.verdict) << " (" << rep.reason << ")\n";
        return exit_falsified;
    }
    Certificate r;
    if (c.exact())
        r = make_certificate(reduce_target_dimension(c.exact_data(), tol), c.metadata);
    else
        r = make_certificate(reduce_target_dimension(c.double_data(), tol), c.metadata);
    if (!verify_certificate(r, tol).verified())
        throw ConstructionError("reduced certificate failed verification");
    write_output(emit_certificate(r), out);
    summary_stream(out) << "sphere S^" << 2 * c.N - 1 << " -> S^" << 2 * r.N - 1 << " (N " << c.N << " -> " << r.N << ")\n";
    return exit_verified;
}

// ---------------------------------------------------------------- catalog

int cmd_catalog(bool list, const std::string& id, const std::string& out)
{
    if (list == !id.empty())
        throw UsageError("give --list or an id");
    if (list) {
        for (const auto& key : catalog_ids())
            std::cout << key << "\t" << catalog_entry(key).description << "\n";
        return exit_verified;
    }
    auto e = catalog_entry(id);
    json mp = json::array();
    for (const auto& c : e.minpoly)
        mp.push_back(c.get_str());
    json meta{{"catalog_id", e.id}, {"description", e.description}, {"degree", e.degree}, {"minpoly", mp}, {"embedding", embedding_name(e.expected_embedding)}};
    write_output(emit_certificate(make_certificate(e.data, meta)), out);
    return exit_verified;
}

std::string catalog_help()
{
    std::string s = "Catalog ids:";
    for (const auto& id : catalog_ids())
        s += " " + id;
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Isometric immersions of flat tori into spheres: certificates, constructions and lattice tools"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 verified, 1 falsified, 2 indeterminate/infeasible/construction failure, 64 usage, 65 malformed input.\n"
               "Environment: TORI_TOL sets the default tolerance.");
    double tol = default_tolerance();

    VerifyOpts vo;
    vo.tol = tol;
    auto* verify = app.add_subcommand("verify", "verify a certificate file");
    verify->add_option("file", vo.path, "certificate JSON")->required();
    verify->add_option("--tol", vo.tol, "absolute tolerance for floating data");
    verify->add_flag("--exact", vo.exact, "require exact verification");
    verify->add_flag("--exhaustive-embedding", vo.exhaustive, "search for a collapsing point when no unit minor exists");
    verify->add_option("--format", vo.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    ConstructOpts co;
    auto* construct = app.add_subcommand("construct", "build a verified certificate");
    construct->require_subcommand(1);
    auto add_out = [&](CLI::App* s) { s->add_option("--out,-o", co.out, "output file (default stdout)"); };
    auto* rat = construct->add_subcommand("rational", "rational torus via sampling and linear programming");
    rat->add_option("--gram", co.gram, "gram matrix file or I<n>")->required();
    rat->add_option("--seed", co.seed, "sampling seed");
    rat->add_option("--samples", co.samples, "number of sample points (default 4 dim Sym_n)");
    rat->add_option("--max-den", co.max_den, "cap on the common denominator");
    add_out(rat);
    auto* pen = construct->add_subcommand("pencil", "3-torus from Y via the logdet maximizer");
    pen->add_option("--Y", co.Yfile, "integer matrix file, 3 rows")->required();
    pen->add_option("--kind", co.kind, "auto, rank5 or rank4")->check(CLI::IsMember({"auto", "rank5", "rank4"}));
    add_out(pen);
    auto* py = construct->add_subcommand("pythagorean", "non-homogeneous family on a Pythagorean 3-torus");
    py->add_option("--triple", co.triple, "p q r")->expected(3);
    py->add_option("--R1", co.R1, "radius of the first off-diagonal block (default 0)");
    py->add_option("--R2", co.R2, "radius of the second off-diagonal block (default 0)");
    py->add_option("--phi1", co.phi1, "first block angle phi1");
    py->add_option("--psi1", co.psi1, "first block angle psi1");
    py->add_option("--phi2", co.phi2, "second block angle phi2");
    py->add_option("--psi2", co.psi2, "second block angle psi2");
    add_out(py);
    auto* br = construct->add_subcommand("bryant", "2-torus family in S^7");
    br->add_option("--mn", co.mn, "m n")->expected(2);
    br->add_option("--rho", co.rho, "rho as a rational");
    br->add_option("--rho-over-b", co.rho_over_b, "rho b as a rational");
    add_out(br);

    EnumerateOpts eo;
    auto* en = app.add_subcommand("enumerate", "dual-lattice vectors and spectrum");
    en->add_option("--gram", eo.gram, "gram matrix file or I<n>")->required();
    en->add_option("--target", eo.target, "list vectors of this norm");
    en->add_option("--box", eo.box, "box bound for --target");
    en->add_flag("--shortest", eo.shortest, "list shortest vectors");
    en->add_option("--spectrum", eo.spectrum_count, "first K eigenvalues with multiplicities");

    std::string red_path, red_out;
    auto* red = app.add_subcommand("reduce", "lower the target sphere dimension");
    red->add_option("file", red_path, "certificate JSON")->required();
    red->add_option("--out,-o", red_out, "output file (default stdout)");
    red->add_option("--tol", tol, "absolute tolerance");

    bool cat_list = false;
    std::string cat_id, cat_out;
    auto* cat = app.add_subcommand("catalog", "built-in example certificates");
    cat->add_flag("--list", cat_list, "list ids");
    cat->add_option("id", cat_id, "catalog id");
    cat->add_option("--out,-o", cat_out, "output file (default stdout)");
    cat->footer(catalog_help());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*verify)
            return cmd_verify(vo);
        if (*rat)
            return construct_rational_cmd(co);
        if (*pen)
            return construct_pencil_cmd(co);
        if (*py)
            return construct_pythagorean_cmd(co);
        if (*br)
            return construct_bryant_cmd(co);
        if (*en)
            return cmd_enumerate(eo);
        if (*red)
            return cmd_reduce(red_path, red_out, tol);
        if (*cat)
            return cmd_catalog(cat_list, cat_id, cat_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return exit_data;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_indeterminate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_indeterminate;
    }
    return exit_usage;
}
