#include "linform/io.hpp"

#include "linform/errors.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace linform {

namespace {

Rational read_value(const json& j, const std::string& field) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_number_unsigned()) return Rational(j.get<unsigned long>());
        if (j.is_number_float()) return parse_rational(shortest_decimal(j.get<double>()));
    } catch (const Error& e) {
        throw Error(ErrorKind::schema, field + ": " + e.what());
    }
    throw Error(ErrorKind::schema, field + ": expected a rational string or a number");
}

}  // namespace

ModelSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::schema, std::string("spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("components")) throw Error(ErrorKind::schema, "components: missing");
    const json& list = doc["components"];
    if (!list.is_array() || list.empty()) throw Error(ErrorKind::schema, "components: expected a non-empty array");

    std::vector<ExactComponent> comps;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string prefix = "components[" + std::to_string(k) + "]";
        const json& c = list[k];
        if (!c.is_object()) throw Error(ErrorKind::schema, prefix + ": expected an object");
        for (const auto& [key, value] : c.items()) {
            if (key != "rate" && key != "speed" && key != "start" && key != "coef") {
                throw Error(ErrorKind::schema, prefix + "." + key + ": unknown field");
            }
        }
        auto field = [&](const char* name) {
            const std::string path = prefix + "." + name;
            if (!c.contains(name)) throw Error(ErrorKind::schema, path + ": missing");
            return read_value(c[name], path);
        };
        ExactComponent e{field("rate"), field("speed"), field("start"), field("coef")};
        if (e.rate <= 0) throw Error(ErrorKind::schema, prefix + ".rate: must be positive");
        if (e.speed <= 0) throw Error(ErrorKind::schema, prefix + ".speed: must be positive");
        if (e.coef == 0) throw Error(ErrorKind::schema, prefix + ".coef: must be nonzero");
        comps.push_back(std::move(e));
    }
    return ModelSpec::from_exact(std::move(comps));
}

ModelSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::schema, "cannot open spec file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

json spec_to_json(const ModelSpec& spec) {
    json list = json::array();
    for (const auto& c : spec.components()) {
        list.push_back({{"rate", to_string(c.exact.rate)},
                        {"speed", to_string(c.exact.speed)},
                        {"start", to_string(c.exact.start)},
                        {"coef", to_string(c.exact.coef)}});
    }
    return {{"components", list}};
}

std::string spec_hash(const ModelSpec& spec) {
    const std::string text = spec_to_json(spec).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    std::array<char, 17> hex{};
    std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(h));
    return hex.data();
}

json metadata_json(const Metadata& meta) {
    json j = {{"tool", kToolName}, {"version", kToolVersion}, {"spec_hash", meta.spec_hash}};
    j["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
    return j;
}

std::string metadata_csv(const Metadata& meta) {
    std::string s = std::string("# tool=") + kToolName + "\n# version=" + kToolVersion +
                    "\n# spec_hash=" + meta.spec_hash + "\n";
    if (meta.seed) s += "# seed=" + std::to_string(*meta.seed) + "\n";
    return s;
}

json operator_to_json(const OperatorPoly& op) {
    json terms = json::array();
    for (auto it = op.terms().rbegin(); it != op.terms().rend(); ++it) {
        terms.push_back({{"dt", it->first.dt}, {"dx", it->first.dx}, {"coef", to_string(it->second)}});
    }
    return terms;
}

OperatorPoly operator_from_json(const json& terms) {
    if (!terms.is_array()) throw Error(ErrorKind::schema, "terms: expected an array");
    OperatorPoly p;
    for (const auto& t : terms) {
        p += OperatorPoly::monomial(t.at("dt").get<unsigned>(), t.at("dx").get<unsigned>(),
                                    parse_rational(t.at("coef").get<std::string>()));
    }
    return p;
}

json atoms_to_json(const std::vector<SingularAtom>& atoms) {
    json list = json::array();
    for (const auto& a : atoms) {
        list.push_back({{"location", a.location},
                        {"mass", a.mass},
                        {"multiplicity", a.multiplicity},
                        {"sign_indices", a.sign_indices}});
    }
    return list;
}

std::vector<SingularAtom> atoms_from_json(const json& j) {
    std::vector<SingularAtom> out;
    for (const auto& a : j) {
        SingularAtom s;
        s.location = a.at("location").get<double>();
        s.mass = a.at("mass").get<double>();
        s.multiplicity = a.at("multiplicity").get<int>();
        if (a.contains("sign_indices")) s.sign_indices = a["sign_indices"].get<std::vector<std::uint32_t>>();
        out.push_back(std::move(s));
    }
    return out;
}

json grid_to_json(const DistributionGrid& grid) {
    json j = {{"t", grid.t}, {"x0", grid.x0}, {"dx", grid.dx}, {"ac_mass", grid.ac_mass}};
    j["values"] = grid.values;
    j["warnings"] = grid.warnings;
    return j;
}

DistributionGrid grid_from_json(const json& j) {
    DistributionGrid g;
    g.t = j.at("t").get<double>();
    g.x0 = j.at("x0").get<double>();
    g.dx = j.at("dx").get<double>();
    g.ac_mass = j.at("ac_mass").get<double>();
    g.values = j.at("values").get<std::vector<double>>();
    if (j.contains("warnings")) g.warnings = j["warnings"].get<std::vector<std::string>>();
    return g;
}

void write_grid_csv(std::ostream& os, const DistributionGrid& grid, const Metadata& meta) {
    os << metadata_csv(meta) << "# t=" << shortest_decimal(grid.t) << "\n# ac_mass=" << shortest_decimal(grid.ac_mass)
       << "\nx,density\n";
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        os << shortest_decimal(grid.x_at(i)) << ',' << shortest_decimal(grid.values[i]) << '\n';
    }
}

json report_to_json(const VerificationReport& r) {
    json details = json::array();
    for (const auto& d : r.details) details.push_back({{"point", d.point}, {"residual", d.residual}});
    return {{"check_name", r.check_name},
            {"status", std::string(to_string(r.status))},
            {"passed", r.passed},
            {"advisory", r.advisory},
            {"max_residual", r.max_residual},
            {"tolerance", r.tolerance},
            {"notes", r.notes},
            {"details", details}};
}

void write_samples_csv(std::ostream& os, const SampleSet& s, const Metadata& meta) {
    Metadata m = meta;
    m.seed = s.seed;
    os << metadata_csv(m) << "# t=" << shortest_decimal(s.t) << "\nvalue,event_count,initial_sign\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << shortest_decimal(s.values[i]) << ',' << s.event_counts[i] << ',' << s.initial_signs[i] << '\n';
    }
}

SampleSet read_samples_csv(std::istream& is) {
    SampleSet s;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            try {
                if (key == "t") s.t = std::stod(value);
                if (key == "seed") s.seed = std::stoull(value);
            } catch (const std::logic_error&) {
                throw Error(ErrorKind::schema, "malformed header line: " + line);
            }
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) {
            throw Error(ErrorKind::schema, "malformed sample row: " + line);
        }
        try {
            s.values.push_back(std::stod(a));
            s.event_counts.push_back(static_cast<std::uint32_t>(std::stoul(b)));
            s.initial_signs.push_back(std::getline(row, c, ',') ? static_cast<std::uint32_t>(std::stoul(c)) : 0u);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::schema, "malformed sample row: " + line);
        }
    }
    return s;
}

namespace {

template <typename U>
void put_le(std::ostream& os, U v) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is) {
    std::array<unsigned char, sizeof(U)> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw Error(ErrorKind::schema, "truncated binary sample file");
    }
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
    return v;
}

}  // namespace

void write_samples_binary(std::ostream& os, const SampleSet& s) {
    put_le<std::uint64_t>(os, s.size());
    put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(s.t));
    for (std::size_t i = 0; i < s.size(); ++i) {
        put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(s.values[i]));
        put_le<std::uint32_t>(os, s.event_counts[i]);
    }
}

SampleSet read_samples_binary(std::istream& is) {
    SampleSet s;
    const auto count = get_le<std::uint64_t>(is);
    s.t = std::bit_cast<double>(get_le<std::uint64_t>(is));
    s.values.reserve(count);
    s.event_counts.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        s.values.push_back(std::bit_cast<double>(get_le<std::uint64_t>(is)));
        s.event_counts.push_back(get_le<std::uint32_t>(is));
    }
    s.initial_signs.assign(count, 0);
    return s;
}

}  // namespace linform
