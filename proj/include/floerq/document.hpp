#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floerq/error.hpp"
#include "floerq/floer.hpp"
#include "floerq/tables.hpp"

namespace floerq {

inline constexpr const char* document_version = "floerq/1";

/// A gluing relation the document asserts: result = first ◊_ij second, or,
/// for kind "box", result = ¤_ij first.
struct DeclaredGluing {
    std::string kind = "diamond";
    std::string first;
    std::string second;
    std::string result;
    std::size_t i = 1;
    std::size_t j = 1;

    friend bool operator==(const DeclaredGluing&, const DeclaredGluing&) = default;
};

/// Everything the CLI reads and writes.
struct Document {
    std::string version = document_version;
    std::string name;
    std::vector<std::string> notes;
    FloerData data;
    std::optional<FloerData> data2;
    std::vector<CountTable> tables;
    std::vector<DeclaredGluing> gluings;

    const FloerData& data_named(const std::string& which) const
    {
        if (which == "data")
            return data;
        if (which == "data2" && data2)
            return *data2;
        throw Error(ErrorKind::lookup, "document has no data set '" + which + "'");
    }

    const CountTable* find_table(const std::string& label) const
    {
        for (const auto& t : tables)
            if (t.label == label)
                return &t;
        return nullptr;
    }

    friend bool operator==(const Document&, const Document&) = default;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline void allow_only(const ojson& obj, std::initializer_list<const char*> fields, const std::string& where, bool strict)
{
    if (!obj.is_object())
        throw Error(ErrorKind::parse, where + ": expected an object");
    if (!strict)
        return;
    std::set<std::string> ok(fields.begin(), fields.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key))
            throw Error(ErrorKind::parse, where + ": unknown field '" + key + "'");
}

inline const ojson& require(const ojson& obj, const char* field, const std::string& where)
{
    auto it = obj.find(field);
    if (it == obj.end())
        throw Error(ErrorKind::parse, where + ": missing field '" + field + "'");
    return *it;
}

inline std::int64_t get_int(const ojson& obj, const char* field, const std::string& where)
{
    const ojson& v = require(obj, field, where);
    if (!v.is_number_integer())
        throw Error(ErrorKind::parse, where + ": field '" + field + "' must be an integer");
    return v.get<std::int64_t>();
}

inline std::string get_string(const ojson& obj, const char* field, const std::string& where)
{
    const ojson& v = require(obj, field, where);
    if (!v.is_string())
        throw Error(ErrorKind::parse, where + ": field '" + field + "' must be a string");
    return v.get<std::string>();
}

inline std::vector<std::string> get_names(const ojson& obj, const char* field, const std::string& where)
{
    const ojson& v = require(obj, field, where);
    if (!v.is_array())
        throw Error(ErrorKind::parse, where + ": field '" + field + "' must be an array");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string())
            throw Error(ErrorKind::parse, where + ": orbit names must be strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

inline FloerData parse_data(const ojson& j, const std::string& where, bool strict)
{
    allow_only(j, {"n", "N0", "N1", "orbits", "m1"}, where, strict);
    std::vector<Orbit> orbits;
    const ojson& jo = require(j, "orbits", where);
    if (!jo.is_array())
        throw Error(ErrorKind::parse, where + ": 'orbits' must be an array");
    for (std::size_t k = 0; k < jo.size(); ++k) {
        const std::string w = where + ".orbits[" + std::to_string(k) + "]";
        allow_only(jo[k], {"name", "mu"}, w, strict);
        orbits.push_back({get_string(jo[k], "name", w), get_int(jo[k], "mu", w)});
    }
    std::vector<M1Entry> m1;
    if (auto it = j.find("m1"); it != j.end()) {
        if (!it->is_array())
            throw Error(ErrorKind::parse, where + ": 'm1' must be an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const std::string w = where + ".m1[" + std::to_string(k) + "]";
            allow_only((*it)[k], {"from", "to", "count"}, w, strict);
            m1.push_back({get_string((*it)[k], "from", w), get_string((*it)[k], "to", w), get_int((*it)[k], "count", w)});
        }
    }
    const std::int64_t n = get_int(j, "n", where);
    if (n < 0 || n > 1'000'000)
        throw Error(ErrorKind::parse, where + ": 'n' out of range");
    return FloerData(static_cast<int>(n), get_int(j, "N0", where), get_int(j, "N1", where), std::move(orbits),
                     std::move(m1));
}

inline CountTable parse_table(const ojson& j, const std::string& where, bool strict)
{
    allow_only(j, {"g", "kminus", "kplus", "q", "label", "entries", "faces", "between"}, where, strict);
    CountTable t;
    t.key = {static_cast<int>(get_int(j, "g", where)), static_cast<int>(get_int(j, "kminus", where)),
             static_cast<int>(get_int(j, "kplus", where))};
    t.q = static_cast<int>(get_int(j, "q", where));
    t.label = get_string(j, "label", where);
    const ojson& je = require(j, "entries", where);
    if (!je.is_array())
        throw Error(ErrorKind::parse, where + ": 'entries' must be an array");
    for (std::size_t k = 0; k < je.size(); ++k) {
        const std::string w = where + ".entries[" + std::to_string(k) + "]";
        allow_only(je[k], {"minus", "plus", "count"}, w, strict);
        OrbitTuple tuple{get_names(je[k], "minus", w), get_names(je[k], "plus", w)};
        const Int count = get_int(je[k], "count", w);
        if (t.entries.count(tuple))
            throw Error(ErrorKind::parse, w + ": duplicate entry " + describe(tuple));
        if (count != 0)
            t.entries[tuple] = count;
    }
    if (auto it = j.find("faces"); it != j.end()) {
        if (!it->is_object())
            throw Error(ErrorKind::parse, where + ": 'faces' must be an object");
        for (const auto& [key, value] : it->items()) {
            int nu = 0, side = 0;
            char comma = 0;
            std::istringstream in(key);
            if (!(in >> nu >> comma >> side) || comma != ',' || !in.eof() || !value.is_string())
                throw Error(ErrorKind::parse, where + ": face keys are \"nu,side\" with a table label value");
            t.faces[{nu, side}] = value.get<std::string>();
        }
    }
    if (auto it = j.find("between"); it != j.end()) {
        if (!it->is_array() || it->size() != 2 || !(*it)[0].is_string() || !(*it)[1].is_string())
            throw Error(ErrorKind::parse, where + ": 'between' must be a pair of data names");
        t.minus_data = (*it)[0].get<std::string>();
        t.plus_data = (*it)[1].get<std::string>();
    }
    return t;
}

inline DeclaredGluing parse_gluing(const ojson& j, const std::string& where, bool strict)
{
    allow_only(j, {"kind", "first", "second", "result", "i", "j"}, where, strict);
    DeclaredGluing g;
    if (j.contains("kind"))
        g.kind = get_string(j, "kind", where);
    if (g.kind != "diamond" && g.kind != "box")
        throw Error(ErrorKind::parse, where + ": gluing kind must be 'diamond' or 'box'");
    g.first = get_string(j, "first", where);
    if (g.kind == "diamond")
        g.second = get_string(j, "second", where);
    g.result = get_string(j, "result", where);
    const std::int64_t i = get_int(j, "i", where), jj = get_int(j, "j", where);
    if (i < 1 || jj < 1)
        throw Error(ErrorKind::parse, where + ": gluing indices are 1-based");
    g.i = static_cast<std::size_t>(i);
    g.j = static_cast<std::size_t>(jj);
    return g;
}

inline ojson data_to_json(const FloerData& d)
{
    ojson j;
    j["n"] = d.n();
    j["N0"] = d.N0();
    j["N1"] = d.N1();
    j["orbits"] = ojson::array();
    for (const auto& o : d.orbits())
        j["orbits"].push_back({{"name", o.name}, {"mu", o.mu}});
    j["m1"] = ojson::array();
    for (const auto& e : d.m1_entries())
        j["m1"].push_back({{"from", e.from}, {"to", e.to}, {"count", e.count}});
    return j;
}

} // namespace detail

inline nlohmann::ordered_json table_to_json(const CountTable& t)
{
    detail::ojson j;
    j["g"] = t.key.g;
    j["kminus"] = t.key.k_minus;
    j["kplus"] = t.key.k_plus;
    j["q"] = t.q;
    j["label"] = t.label;
    if (t.minus_data != "data" || t.plus_data != "data")
        j["between"] = {t.minus_data, t.plus_data};
    j["entries"] = detail::ojson::array();
    for (const auto& [tuple, count] : t.entries)
        j["entries"].push_back({{"minus", tuple.first}, {"plus", tuple.second}, {"count", count}});
    if (!t.faces.empty()) {
        detail::ojson faces = detail::ojson::object();
        for (const auto& [fk, label] : t.faces)
            faces[std::to_string(fk.first) + "," + std::to_string(fk.second)] = label;
        j["faces"] = faces;
    }
    return j;
}

inline nlohmann::ordered_json to_json(const Document& doc)
{
    detail::ojson j;
    j["version"] = doc.version;
    j["name"] = doc.name;
    j["notes"] = doc.notes;
    j["data"] = detail::data_to_json(doc.data);
    if (doc.data2)
        j["data2"] = detail::data_to_json(*doc.data2);
    j["tables"] = detail::ojson::array();
    for (const auto& t : doc.tables)
        j["tables"].push_back(table_to_json(t));
    if (!doc.gluings.empty()) {
        j["gluings"] = detail::ojson::array();
        for (const auto& g : doc.gluings) {
            detail::ojson jg;
            jg["kind"] = g.kind;
            jg["first"] = g.first;
            if (g.kind == "diamond")
                jg["second"] = g.second;
            jg["result"] = g.result;
            jg["i"] = g.i;
            jg["j"] = g.j;
            j["gluings"].push_back(jg);
        }
    }
    return j;
}

inline std::string serialize(const Document& doc) { return to_json(doc).dump(2) + "\n"; }

/// Parses a document. A foreign version tag is always rejected; strict mode
/// also rejects unknown fields.
inline Document parse_document(const std::string& text, bool strict = false)
{
    detail::ojson j;
    try {
        j = detail::ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("malformed JSON: ") + e.what());
    }
    detail::allow_only(j, {"version", "name", "notes", "data", "data2", "tables", "gluings"}, "document", strict);
    Document doc;
    doc.version = detail::get_string(j, "version", "document");
    if (doc.version != document_version)
        throw Error(ErrorKind::parse, "unsupported document version '" + doc.version + "'");
    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw Error(ErrorKind::parse, "document: 'name' must be a string");
        doc.name = j["name"].get<std::string>();
    }
    if (j.contains("notes"))
        doc.notes = detail::get_names(j, "notes", "document");
    doc.data = detail::parse_data(detail::require(j, "data", "document"), "data", strict);
    if (j.contains("data2"))
        doc.data2 = detail::parse_data(j["data2"], "data2", strict);
    if (j.contains("tables")) {
        if (!j["tables"].is_array())
            throw Error(ErrorKind::parse, "document: 'tables' must be an array");
        std::set<std::string> labels;
        for (std::size_t k = 0; k < j["tables"].size(); ++k) {
            CountTable t = detail::parse_table(j["tables"][k], "tables[" + std::to_string(k) + "]", strict);
            if (!labels.insert(t.label).second)
                throw Error(ErrorKind::parse, "duplicate table label '" + t.label + "'");
            doc.tables.push_back(std::move(t));
        }
    }
    if (j.contains("gluings")) {
        if (!j["gluings"].is_array())
            throw Error(ErrorKind::parse, "document: 'gluings' must be an array");
        for (std::size_t k = 0; k < j["gluings"].size(); ++k)
            doc.gluings.push_back(detail::parse_gluing(j["gluings"][k], "gluings[" + std::to_string(k) + "]", strict));
    }
    return doc;
}

inline Document load_document(const std::string& path, bool strict = false)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::parse, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str(), strict);
}

inline void save_document(const Document& doc, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::parse, "cannot write '" + path + "'");
    out << serialize(doc);
}

} // namespace floerq
