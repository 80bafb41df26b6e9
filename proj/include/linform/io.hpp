#pragma once

#include "linform/linear_form.hpp"
#include "linform/model.hpp"
#include "linform/montecarlo.hpp"
#include "linform/operator_poly.hpp"
#include "linform/verifier.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace linform {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "linform";
inline constexpr const char* kToolVersion = "1.0.0";

/// {"components":[{"rate":..,"speed":..,"start":..,"coef":..}, ...]}. Values are
/// rational strings ("3/2", "0.25") or JSON numbers; a JSON float is read through
/// its shortest round-trip decimal. Schema errors name the offending field.
ModelSpec parse_spec(const std::string& text);
ModelSpec load_spec(const std::string& path);

/// Canonical form: exact values as "p/q" strings, fixed key order.
json spec_to_json(const ModelSpec& spec);

/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string spec_hash(const ModelSpec& spec);

struct Metadata {
    std::string spec_hash;
    std::optional<std::uint64_t> seed;
};

json metadata_json(const Metadata& meta);
/// "# key=value" lines for CSV outputs.
std::string metadata_csv(const Metadata& meta);

json operator_to_json(const OperatorPoly& op);
OperatorPoly operator_from_json(const json& terms);

json atoms_to_json(const std::vector<SingularAtom>& atoms);
std::vector<SingularAtom> atoms_from_json(const json& j);

json grid_to_json(const DistributionGrid& grid);
DistributionGrid grid_from_json(const json& j);
void write_grid_csv(std::ostream& os, const DistributionGrid& grid, const Metadata& meta);

json report_to_json(const VerificationReport& report);

/// CSV: metadata comments, "t=" comment, header "value,event_count,initial_sign".
void write_samples_csv(std::ostream& os, const SampleSet& s, const Metadata& meta);
SampleSet read_samples_csv(std::istream& is);

/// Little-endian: u64 count, f64 t, then per record f64 value + u32 events.
/// Initial signs and seed are not part of this layout.
void write_samples_binary(std::ostream& os, const SampleSet& s);
SampleSet read_samples_binary(std::istream& is);

}  // namespace linform
