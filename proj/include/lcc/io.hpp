#pragma once

#include "lcc/code_core.hpp"
#include "lcc/graph.hpp"
#include "lcc/ldc_bridge.hpp"
#include "lcc/normal_form.hpp"
#include "lcc/propagation.hpp"
#include "lcc/recovery.hpp"

#include <json.hpp>

#include <string>

namespace lcc {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchema = "lcc-lab/v1";

/// Malformed input file or document.
class FormatError : public PreconditionError {
public:
  using PreconditionError::PreconditionError;
};

Json to_json(const Word &w);
Word word_from_json(const Json &j);

Json to_json(const CorruptionPattern &p);
CorruptionPattern pattern_from_json(const Json &j);

struct Instance {
  LabeledMatchingGraph graph;
  std::vector<Vertex> t1;
};

/// {"schema", "n", "delta", "matchings": [[[u, v], ...] per label], "t1"?}
Json instance_to_json(const LabeledMatchingGraph &g, const std::vector<Vertex> &t1 = {});
Instance instance_from_json(const Json &j);

Json to_json(const NormalForm &nf, bool include_tables = true);
Json to_json(const ValidationReport &r);
Json to_json(const SeedTrace &t);
Json to_json(const CleanupResult &r);
Json to_json(const DecodeReport &r);
Json to_json(const TrialSummary &s);
Json to_json(const BoundReport &b);
Json to_json(const InnerCode &c);
Json to_json(const DistanceReport &d);
Json to_json(const ShatterResult &s);
Json to_json(const LdcConstruction &l);
Json to_json(const LdcTrialSummary &s);

Json read_json_file(const std::string &path);
/// Two-space indented, newline terminated.
void write_json_file(const std::string &path, const Json &j);
std::string dump(const Json &j);

} // namespace lcc
