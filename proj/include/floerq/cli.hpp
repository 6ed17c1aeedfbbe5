#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "floerq/document.hpp"
#include "floerq/error.hpp"
#include "floerq/floer.hpp"
#include "floerq/homology.hpp"
#include "floerq/morse_oracle.hpp"
#include "floerq/products.hpp"
#include "floerq/report.hpp"
#include "floerq/tables.hpp"
#include "floerq/tensor_element.hpp"

namespace floerq::cli {

/// Process exit codes of the floerq commands.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_validation = 3,
    exit_gluing = 4,
};

inline int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::parse: return exit_parse;
    case ErrorKind::composition: return exit_gluing;
    case ErrorKind::overflow:
    case ErrorKind::genericity: return exit_usage;
    default: return exit_validation;
    }
}

using json = nlohmann::ordered_json;

/// One checked unit of a validation run.
struct CheckLine {
    std::string name;
    bool passed = true;
    std::vector<Finding> findings;
};

namespace detail {

inline json finding_json(const Finding& f)
{
    json j;
    j["check"] = f.check;
    j["severity"] = to_string(f.severity);
    j["message"] = f.message;
    j["witness"] = f.witness;
    return j;
}

inline std::string finding_text(const Finding& f)
{
    std::string s = std::string(to_string(f.severity)) + ": " + f.message;
    if (!f.witness.empty())
        s += " [" + f.witness + "]";
    return s;
}

inline CheckLine line_of(std::string name, const Report& r)
{
    CheckLine line;
    line.name = std::move(name);
    line.passed = r.ok();
    line.findings = r.findings;
    return line;
}

inline CheckLine line_of_error(std::string name, const Error& e)
{
    CheckLine line;
    line.name = std::move(name);
    line.passed = false;
    line.findings.push_back({line.name, Severity::error, e.what(), {}});
    return line;
}

inline json to_json_int(const BigInt& v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        return v.str();
    return static_cast<std::int64_t>(v);
}

inline json element_json(const TensorElement& x)
{
    json terms = json::array();
    for (const auto& [k, v] : x.terms()) {
        json t;
        json minus = json::array(), plus = json::array();
        for (std::size_t p = 0; p < k.size(); ++p)
            (p < x.k_minus() ? minus : plus).push_back(x.slot_data(p).orbit(k[p]).name);
        t["minus"] = minus;
        t["plus"] = plus;
        t["count"] = v;
        terms.push_back(t);
    }
    return terms;
}

inline std::string coords_text(const std::vector<BigInt>& v, const std::string& prefix)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0)
            continue;
        const bool neg = v[i] < 0;
        BigInt mag = neg ? BigInt(-v[i]) : v[i];
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (mag != 1)
            s += mag.str() + "*";
        s += prefix + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

inline json coords_json(const std::vector<BigInt>& v)
{
    json a = json::array();
    for (const auto& c : v)
        a.push_back(to_json_int(c));
    return a;
}

/// Parses a cochain such as "2*p01 - p10" or "0"; a trailing '^' on a name
/// is allowed. Names may not contain '+', '-', '*' or whitespace.
inline TensorElement parse_cochain(const DataRef& data, const std::string& text)
{
    TensorElement out = TensorElement::over(data, 1, 0);
    static const std::regex term(R"(\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?([^\s+*-]+)\s*)");
    bool first = true;
    auto begin = std::sregex_iterator(text.begin(), text.end(), term);
    std::size_t consumed = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (static_cast<std::size_t>(m.position(0)) != consumed || (!first && m[1].length() == 0))
            throw Error(ErrorKind::parse, "cannot parse cochain '" + text + "'");
        consumed += static_cast<std::size_t>(m.length(0));
        first = false;
        Int coeff = m[2].matched ? std::stoll(m[2].str()) : 1;
        if (m[1].str() == "-")
            coeff = -coeff;
        std::string name = m[3].str();
        if (name == "0" && !m[2].matched)
            continue;
        if (name.size() > 1 && name.back() == '^')
            name.pop_back();
        if (!data->find(name))
            throw Error(ErrorKind::lookup, "unknown orbit '" + name + "' in cochain '" + text + "'");
        out.add({name}, {}, coeff);
    }
    if (first || consumed != text.size())
        throw Error(ErrorKind::parse, "cannot parse cochain '" + text + "'");
    return out;
}

inline Document load(const std::string& path, bool strict = false) { return load_document(path, strict); }

inline DataRef data_ref(const Document& doc, const std::string& which) { return share(doc.data_named(which)); }

inline bool uniform(const CountTable& t) { return t.minus_data == "data" && t.plus_data == "data"; }

} // namespace detail

/// The oracle document of the flat torus T^dim.
inline Document torus_document(int dim, std::size_t samples = default_samples)
{
    TorusModel model = TorusModel::standard(dim);
    model.validate();
    Document doc;
    doc.name = "T^" + std::to_string(dim);
    doc.notes.push_back("Morse oracle: f = sum_f a_f cos(theta_f), a_f = 1 + 0.25 f");
    doc.notes.push_back("orbit p<bits>: bit f = 1 at the maximum of circle factor f");
    doc.notes.push_back("samples per circle: " + std::to_string(samples));
    doc.data = generate_data(model);
    doc.tables = generate_theta_tables(model, samples);
    return doc;
}

struct ValidateResult {
    int exit = exit_ok;
    std::vector<CheckLine> lines;
};

/// Runs every check a document supports: data validation, table structure,
/// cycle identities, standard and declared gluings.
inline ValidateResult validate_document(const Document& doc, bool strict)
{
    ValidateResult out;
    bool validation_failed = false;
    bool gluing_failed = false;
    auto push = [&](CheckLine line, bool gluing) {
        if (!line.passed)
            (gluing ? gluing_failed : validation_failed) = true;
        out.lines.push_back(std::move(line));
    };

    push(detail::line_of("data", validate_data(doc.data, strict)), false);
    if (doc.data2)
        push(detail::line_of("data2", validate_data(*doc.data2, strict)), false);
    if (validation_failed) {
        out.exit = exit_validation;
        return out;
    }

    DataRef data = share(doc.data);
    std::optional<DataRef> data2;
    if (doc.data2)
        data2 = share(*doc.data2);
    auto ref = [&](const std::string& which) -> DataRef {
        if (which == "data")
            return data;
        if (which == "data2" && data2)
            return *data2;
        throw Error(ErrorKind::lookup, "document has no data set '" + which + "'");
    };

    TableSet all;
    for (const auto& t : doc.tables)
        all.emplace(t.label, t);

    for (const auto& t : doc.tables) {
        const std::string name = "table:" + t.label;
        try {
            DataRef minus = ref(t.minus_data);
            DataRef plus = ref(t.plus_data);
            Report r = check_table(t, *minus, *plus, strict, &all);
            push(detail::line_of(name, r), false);
            if (!r.ok())
                continue;
            if (detail::uniform(t)) {
                push(detail::line_of("cycle:" + t.label, check_cycle(t, data, &all)), false);
            } else if (t.q == 0) {
                Report c;
                c.ran("cycle:" + t.label);
                TensorElement dq = differential(q_of_table(t, minus, plus));
                if (!dq.is_zero())
                    c.add("cycle:" + t.label, Severity::error, "Q of table '" + t.label + "' is not closed",
                          dq.to_string());
                push(detail::line_of("cycle:" + t.label, c), false);
            }
        } catch (const Error& e) {
            push(detail::line_of_error(name, e), false);
        }
    }
    if (validation_failed) {
        out.exit = exit_validation;
        return out;
    }

    ThetaBundle theta(data, doc.tables);
    for (const auto& g : standard_gluings()) {
        if (!(theta.has(g.first) && theta.has(g.second) && theta.has(g.result)))
            continue;
        const auto &t1 = theta.table(g.first), &t2 = theta.table(g.second), &t3 = theta.table(g.result);
        std::string name = "gluing:" + t1.label + "◊" + std::to_string(g.i) + std::to_string(g.j) + t2.label + "=" +
                           t3.label;
        try {
            push(detail::line_of(name, check_gluing(t1, t2, t3, g.i, g.j, data)), true);
        } catch (const Error& e) {
            push(detail::line_of_error(name, e), true);
        }
    }
    if (theta.has(theta_torus)) {
        const auto& t = theta.table(theta_torus);
        std::string name = "self-gluing:" + theta.table(theta_identity).label + "=" + t.label;
        try {
            push(detail::line_of(name, check_self_gluing(theta.table(theta_identity), t, 1, 1, data)), true);
        } catch (const Error& e) {
            push(detail::line_of_error(name, e), true);
        }
    }
    for (const auto& g : doc.gluings) {
        std::string name = "declared:" + g.kind + ":" + g.first + (g.kind == "box" ? "" : "," + g.second) + "->" +
                           g.result;
        try {
            const CountTable& t1 = theta.table(g.first);
            const CountTable& t3 = theta.table(g.result);
            if (g.kind == "box") {
                push(detail::line_of(name, check_self_gluing(t1, t3, g.i, g.j, data)), true);
            } else {
                push(detail::line_of(name, check_gluing(t1, theta.table(g.second), t3, g.i, g.j, data)), true);
            }
        } catch (const Error& e) {
            push(detail::line_of_error(name, e), true);
        }
    }
    out.exit = gluing_failed ? exit_gluing : exit_ok;
    return out;
}

inline void print_lines(const std::vector<CheckLine>& lines, int exit, bool as_json, std::ostream& out)
{
    if (as_json) {
        json j;
        j["command"] = "validate";
        j["ok"] = exit == exit_ok;
        j["exit"] = exit;
        json checks = json::array();
        for (const auto& l : lines) {
            json c;
            c["name"] = l.name;
            c["status"] = l.passed ? "pass" : "fail";
            json fs = json::array();
            for (const auto& f : l.findings)
                fs.push_back(detail::finding_json(f));
            c["findings"] = fs;
            checks.push_back(c);
        }
        j["checks"] = checks;
        out << j.dump(2) << "\n";
        return;
    }
    std::size_t failed = 0;
    for (const auto& l : lines) {
        out << (l.passed ? "PASS " : "FAIL ") << l.name << "\n";
        failed += l.passed ? 0 : 1;
        for (const auto& f : l.findings)
            if (!l.passed || f.severity != Severity::error)
                out << "  " << detail::finding_text(f) << "\n";
    }
    out << lines.size() << " checks, " << failed << " failed, exit " << exit << "\n";
}

inline int cmd_validate(const std::string& path, bool strict, bool as_json, std::ostream& out)
{
    Document doc = detail::load(path, strict);
    ValidateResult r = validate_document(doc, strict);
    print_lines(r.lines, r.exit, as_json, out);
    return r.exit;
}

inline int cmd_homology(const std::string& path, bool as_json, std::ostream& out)
{
    Document doc = detail::load(path);
    if (const Finding* f = validate_data(doc.data).first_error())
        throw Error(ErrorKind::validation, detail::finding_text(*f));
    auto chains = homology(build_cf(doc.data));
    auto cochains = homology(build_cf_dual(doc.data));
    auto flip = [](std::vector<DegreeHomology> h, std::int64_t modulus) {
        for (auto& d : h)
            d.degree = Degree{-d.degree, modulus}.value();
        std::sort(h.begin(), h.end(), [](const auto& a, const auto& b) { return a.degree < b.degree; });
        return h;
    };
    cochains = flip(std::move(cochains), doc.data.modulus());
    if (as_json) {
        auto side = [](const std::vector<DegreeHomology>& h) {
            json a = json::array();
            for (const auto& d : h) {
                json e;
                e["degree"] = d.degree;
                e["rank"] = d.rank;
                json t = json::array();
                for (const auto& v : d.torsion)
                    t.push_back(detail::to_json_int(v));
                e["torsion"] = t;
                a.push_back(e);
            }
            return a;
        };
        json j;
        j["command"] = "homology";
        j["modulus"] = doc.data.modulus();
        j["HF_*"] = side(chains);
        j["HF^*"] = side(cochains);
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    auto print = [&](const char* title, const std::vector<DegreeHomology>& h) {
        out << title << (doc.data.modulus() ? " (degrees mod " + std::to_string(doc.data.modulus()) + ")" : "")
            << "\n";
        for (const auto& d : h) {
            out << "  degree " << d.degree << ": rank " << d.rank;
            for (const auto& t : d.torsion)
                out << " + Z/" << t.str();
            out << "\n";
        }
    };
    print("HF_*", chains);
    print("HF^*", cochains);
    return exit_ok;
}

namespace detail {

/// Text matrix with rows and columns labelled by basis indices.
inline void print_matrix(std::ostream& out, const std::string& title, const std::vector<std::vector<BigInt>>& rows,
                         const std::string& row_prefix, const std::string& col_prefix)
{
    out << title << "\n";
    std::size_t width = 4;
    for (const auto& r : rows)
        for (const auto& v : r)
            width = std::max(width, v.str().size() + 1);
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    out << std::string(6, ' ');
    for (std::size_t c = 0; c < cols; ++c) {
        std::string h = col_prefix + std::to_string(c);
        out << std::string(width > h.size() ? width - h.size() : 1, ' ') << h;
    }
    out << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string h = row_prefix + std::to_string(r);
        out << "  " << h << std::string(h.size() < 4 ? 4 - h.size() : 1, ' ');
        for (const auto& v : rows[r]) {
            std::string s = v.str();
            out << std::string(width - s.size(), ' ') << s;
        }
        out << "\n";
    }
}

inline json matrix_json(const std::vector<std::vector<BigInt>>& rows)
{
    json a = json::array();
    for (const auto& r : rows)
        a.push_back(coords_json(r));
    return a;
}

} // namespace detail

inline int cmd_products(const std::string& path, bool as_json, std::ostream& out)
{
    Document doc = detail::load(path);
    if (const Finding* f = validate_data(doc.data).first_error())
        throw Error(ErrorKind::validation, detail::finding_text(*f));
    DataRef data = share(doc.data);
    ThetaBundle theta(data, doc.tables);
    ClassBasis co(data, true);
    ClassBasis ho(data, false);

    json j;
    j["command"] = "products";
    std::ostringstream text;
    auto basis_json = [](const ClassBasis& b) {
        json a = json::array();
        for (std::size_t i = 0; i < b.size(); ++i) {
            json e;
            e["degree"] = b.degree(i);
            e["representative"] = b.representative(i).to_string();
            a.push_back(e);
        }
        return a;
    };
    j["cohomology_basis"] = basis_json(co);
    j["homology_basis"] = basis_json(ho);
    text << "HF^* basis\n";
    for (std::size_t i = 0; i < co.size(); ++i)
        text << "  e" << i << " (deg " << co.degree(i) << ") = [" << co.representative(i).to_string() << "]\n";
    text << "HF_* basis\n";
    for (std::size_t i = 0; i < ho.size(); ++i)
        text << "  f" << i << " (deg " << ho.degree(i) << ") = [" << ho.representative(i).to_string() << "]\n";

    std::vector<std::string> skipped;
    auto section = [&](const char* name, const std::function<void()>& body) {
        try {
            body();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::missing_table)
                throw;
            skipped.push_back(std::string(name) + ": " + e.what());
        }
    };

    section("cup", [&] {
        json table = json::array();
        text << "cup e_i ∪ e_j\n";
        for (std::size_t a = 0; a < co.size(); ++a)
            for (std::size_t b = 0; b < co.size(); ++b) {
                auto v = co.coordinates(cup(co.representative(a), co.representative(b), theta).element);
                table.push_back(json{{"i", a}, {"j", b}, {"value", detail::coords_json(v)}});
                text << "  e" << a << " ∪ e" << b << " = " << detail::coords_text(v, "e") << "\n";
            }
        j["cup"] = table;
    });
    section("intersection", [&] {
        json table = json::array();
        text << "intersection f_i · f_j\n";
        for (std::size_t a = 0; a < ho.size(); ++a)
            for (std::size_t b = 0; b < ho.size(); ++b) {
                auto v = ho.coordinates(intersection(ho.representative(a), ho.representative(b), theta).element);
                table.push_back(json{{"i", a}, {"j", b}, {"value", detail::coords_json(v)}});
                text << "  f" << a << " · f" << b << " = " << detail::coords_text(v, "f") << "\n";
            }
        j["intersection"] = table;
    });
    section("cap", [&] {
        json table = json::array();
        text << "cap f_i ∩ e_j\n";
        for (std::size_t a = 0; a < ho.size(); ++a)
            for (std::size_t b = 0; b < co.size(); ++b) {
                auto v = ho.coordinates(cap(ho.representative(a), co.representative(b), theta).element);
                table.push_back(json{{"i", a}, {"j", b}, {"value", detail::coords_json(v)}});
                text << "  f" << a << " ∩ e" << b << " = " << detail::coords_text(v, "f") << "\n";
            }
        j["cap"] = table;
    });
    bool pd_inverse = false;
    section("poincare duality", [&] {
        std::vector<std::vector<BigInt>> sharp(co.size(), std::vector<BigInt>(ho.size()));
        std::vector<std::vector<BigInt>> flat(ho.size(), std::vector<BigInt>(co.size()));
        for (std::size_t c = 0; c < ho.size(); ++c) {
            auto v = co.coordinates(pd_sharp(ho.representative(c), theta).element);
            for (std::size_t r = 0; r < co.size(); ++r)
                sharp[r][c] = v[r];
        }
        for (std::size_t c = 0; c < co.size(); ++c) {
            auto v = ho.coordinates(pd_flat(co.representative(c), theta).element);
            for (std::size_t r = 0; r < ho.size(); ++r)
                flat[r][c] = v[r];
        }
        pd_inverse = co.size() == ho.size();
        for (std::size_t r = 0; pd_inverse && r < ho.size(); ++r)
            for (std::size_t c = 0; c < ho.size(); ++c) {
                BigInt fs = 0, sf = 0;
                for (std::size_t k = 0; k < co.size(); ++k) {
                    fs += flat[r][k] * sharp[k][c];
                    sf += sharp[r][k] * flat[k][c];
                }
                if (fs != (r == c ? 1 : 0) || sf != (r == c ? 1 : 0))
                    pd_inverse = false;
            }
        j["pd_sharp"] = detail::matrix_json(sharp);
        j["pd_flat"] = detail::matrix_json(flat);
        j["pd_mutually_inverse"] = pd_inverse;
        detail::print_matrix(text, "PD sharp (column f_j -> e_i)", sharp, "e", "f");
        detail::print_matrix(text, "PD flat (column e_j -> f_i)", flat, "f", "e");
        text << "PD mutually inverse: " << (pd_inverse ? "yes" : "no") << "\n";
    });
    section("unit", [&] {
        auto v = co.coordinates(unit(theta).element);
        j["unit"] = detail::coords_json(v);
        text << "unit 1 = " << detail::coords_text(v, "e") << "\n";
    });
    section("top", [&] {
        auto v = ho.coordinates(top_class(theta).element);
        j["top"] = detail::coords_json(v);
        text << "top [M] = " << detail::coords_text(v, "f") << "\n";
    });
    const Int chi = euler(doc.data);
    const Int trace = scalar(box(identity_element(data), 1, 1));
    j["euler"] = chi;
    j["trace_identity"] = trace;
    text << "euler " << chi << "\n";
    text << "box11(identity) " << trace << "\n";
    if (theta.has(theta_torus)) {
        Int t = scalar(theta.q(theta_torus));
        j["torus"] = t;
        text << "Q(theta_1_0_0) " << t << "\n";
    }
    json sk = json::array();
    for (const auto& s : skipped) {
        sk.push_back(s);
        text << "skipped " << s << "\n";
    }
    j["skipped"] = sk;
    if (as_json)
        out << j.dump(2) << "\n";
    else
        out << text.str();
    return exit_ok;
}

struct MasseyArgs {
    std::string a, b, c;
    std::string zeta = "0";
    std::string xi = "0";
    std::optional<std::string> lambda;
};

inline int cmd_massey(const std::string& path, const MasseyArgs& args, bool as_json, std::ostream& out)
{
    Document doc = detail::load(path);
    if (const Finding* f = validate_data(doc.data).first_error())
        throw Error(ErrorKind::validation, detail::finding_text(*f));
    DataRef data = share(doc.data);
    ThetaBundle theta(data, doc.tables);
    TensorElement a = detail::parse_cochain(data, args.a);
    TensorElement b = detail::parse_cochain(data, args.b);
    TensorElement c = detail::parse_cochain(data, args.c);
    TensorElement zeta = detail::parse_cochain(data, args.zeta);
    TensorElement xi = detail::parse_cochain(data, args.xi);

    CountTable lambda;
    if (args.lambda) {
        lambda = theta.table(*args.lambda);
    } else if (theta.has(theta_four)) {
        const std::string& four = theta.table(theta_four).label;
        lambda = zero_homotopy(four, four);
    } else {
        const CountTable& pants = theta.table(theta_pants);
        theta.insert(glue_tables(pants, pants, 1, 1, data, "pants_11_pants"));
        theta.insert(glue_tables(pants, pants, 2, 1, data, "pants_21_pants"));
        lambda = zero_homotopy("pants_11_pants", "pants_21_pants");
    }

    MasseyResult m = massey(a, b, c, theta, zeta, xi, lambda);
    const int code = m.hypotheses.ok() ? exit_ok : exit_validation;
    std::vector<std::vector<BigInt>> indet;
    ClassBasis co(data, true);
    std::vector<BigInt> rep_coords;
    if (code == exit_ok) {
        for (const auto& z : m.indeterminacy)
            indet.push_back(co.coordinates(z));
        rep_coords = co.coordinates(m.representative);
    }
    if (as_json) {
        json j;
        j["command"] = "massey";
        j["exit"] = code;
        json hyp = json::array();
        for (const auto& f : m.hypotheses.findings)
            hyp.push_back(detail::finding_json(f));
        j["hypotheses_ok"] = m.hypotheses.ok();
        j["findings"] = hyp;
        if (code == exit_ok) {
            j["representative"] = detail::element_json(m.representative);
            j["class"] = detail::coords_json(rep_coords);
            j["closed"] = m.closed;
            j["indeterminacy"] = detail::matrix_json(indet);
            j["trivial"] = m.trivial;
        }
        out << j.dump(2) << "\n";
        return code;
    }
    out << "hypotheses: " << (m.hypotheses.ok() ? "ok" : "violated") << "\n";
    for (const auto& f : m.hypotheses.findings)
        out << "  " << f.check << " " << detail::finding_text(f) << "\n";
    if (code != exit_ok)
        return code;
    out << "representative " << m.representative.to_string() << "\n";
    out << "class " << detail::coords_text(rep_coords, "e") << "\n";
    out << "closed " << (m.closed ? "yes" : "no") << "\n";
    out << "indeterminacy basis (" << indet.size() << ")\n";
    for (const auto& v : indet)
        out << "  " << detail::coords_text(v, "e") << "\n";
    out << "trivial modulo indeterminacy: " << (m.trivial ? "yes" : "no") << "\n";
    return exit_ok;
}

inline int cmd_gen_torus(int dim, const std::string& path, std::size_t samples, std::ostream& out)
{
    Document doc = torus_document(dim, samples);
    if (path.empty() || path == "-")
        out << serialize(doc);
    else
        save_document(doc, path);
    return exit_ok;
}

struct GlueArgs {
    std::string first;
    std::string second; // empty for a self-gluing
    std::size_t i = 1;
    std::size_t j = 1;
    std::string label = "glued";
    std::optional<std::string> compare;
};

/// Glues two tables (or traces one) and prints the resulting table; with
/// `compare`, checks it against a table of the document.
inline int cmd_glue(const std::string& path, const GlueArgs& args, bool as_json, std::ostream& out)
{
    Document doc = detail::load(path);
    if (const Finding* f = validate_data(doc.data).first_error())
        throw Error(ErrorKind::validation, detail::finding_text(*f));
    DataRef data = share(doc.data);
    ThetaBundle theta(data, doc.tables);
    const CountTable& t1 = theta.table(args.first);
    CountTable glued;
    if (args.second.empty()) {
        SlotKey key{t1.key.g + 1, t1.key.k_minus - 1, t1.key.k_plus - 1};
        if (key.k_minus < 0 || key.k_plus < 0)
            throw Error(ErrorKind::composition, "table '" + t1.label + "' has no slot pair to trace");
        glued = table_of_q(box(q_of_table(t1, data), args.i, args.j), key, t1.q, args.label);
    } else {
        glued = glue_tables(t1, theta.table(args.second), args.i, args.j, data, args.label);
    }
    int code = exit_ok;
    std::optional<bool> equal;
    std::string witness;
    if (args.compare) {
        const CountTable& other = theta.table(*args.compare);
        equal = other.key == glued.key && other.q == glued.q && other.entries == glued.entries;
        if (!*equal) {
            code = exit_gluing;
            std::set<OrbitTuple> tuples;
            for (const auto& [tuple, c] : glued.entries)
                tuples.insert(tuple);
            for (const auto& [tuple, c] : other.entries)
                tuples.insert(tuple);
            for (const auto& tuple : tuples)
                if (glued.count(tuple.first, tuple.second) != other.count(tuple.first, tuple.second)) {
                    witness = describe(tuple) + ": " + std::to_string(glued.count(tuple.first, tuple.second)) +
                              " vs " + std::to_string(other.count(tuple.first, tuple.second));
                    break;
                }
            if (witness.empty())
                witness = "slot key or dimension differs";
        }
    }
    if (as_json) {
        json j;
        j["command"] = "glue";
        j["table"] = table_to_json(glued);
        if (equal)
            j["matches"] = *equal;
        if (!witness.empty())
            j["witness"] = witness;
        j["exit"] = code;
        out << j.dump(2) << "\n";
        return code;
    }
    out << table_to_json(glued).dump(2) << "\n";
    if (equal)
        out << (*equal ? "matches " : "differs from ") << *args.compare << (witness.empty() ? "" : " [" + witness + "]")
            << "\n";
    return code;
}

} // namespace floerq::cli
