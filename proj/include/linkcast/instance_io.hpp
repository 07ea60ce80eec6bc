#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linkcast/forecaster.hpp"
#include "linkcast/sampling.hpp"
#include "linkcast/temporal_graph.hpp"

namespace linkcast {

/// Provenance lines written as `# key=value` comments at the top of instance
/// and score files.
struct InstanceHeader {
  std::string input_fingerprint;
  std::string scheme;
  std::string sampler;

  /// Hash of the three fields; a score file must echo its instance file's.
  std::string fingerprint() const;
};

InstanceHeader make_header(const std::string& input_fingerprint, const InstanceSet& set);

/// `chunk_ordinal,src,dst,t,label` rows with original node labels.
void write_instances(std::ostream& out, const TemporalGraph& g, const InstanceSet& set, const InstanceHeader& header);

/// Instance columns plus `score`; `scores` is aligned with set.chunks.
void write_scores(std::ostream& out, const TemporalGraph& g, const InstanceSet& set,
                  const std::vector<std::vector<double>>& scores, const InstanceHeader& header);

struct ScoreFile {
  std::string fingerprint;  // empty if the file carries none
  std::vector<ScoredInstance> rows;
};

/// Reads a score file, mapping labels through the graph's remap table. When
/// `expected_fingerprint` is set, a missing or different fingerprint is an
/// IngestError.
ScoreFile read_score_file(const std::filesystem::path& path, const TemporalGraph& g,
                          const std::optional<std::string>& expected_fingerprint = std::nullopt);
ScoreFile parse_score_file(std::string_view text, const TemporalGraph& g,
                           const std::optional<std::string>& expected_fingerprint = std::nullopt,
                           const std::string& source_name = "<memory>");

}  // namespace linkcast
