#include "linkcast/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "linkcast/errors.hpp"

namespace linkcast {

namespace {

void write_header(std::ostream& out, const char* kind, const InstanceHeader& header) {
  out << "# linkcast " << kind << '\n'
      << "# input=" << header.input_fingerprint << '\n'
      << "# scheme=" << header.scheme << '\n'
      << "# sampler=" << header.sampler << '\n'
      << "# fingerprint=" << header.fingerprint() << '\n';
}

void append_row(std::string& buf, const TemporalGraph& g, const EvalInstance& inst) {
  char num[32];
  auto put = [&](auto v) {
    const auto [end, ec] = std::to_chars(num, num + sizeof num, v);
    buf.append(num, end);
  };
  put(inst.chunk_ordinal);
  buf += ',';
  buf += g.label(inst.src);
  buf += ',';
  buf += g.label(inst.dst);
  buf += ',';
  put(inst.t);
  buf += ',';
  buf += inst.label == Label::Positive ? '1' : '0';
}

template <typename RowFn>
void write_rows(std::ostream& out, const InstanceSet& set, RowFn&& row) {
  std::string buf;
  buf.reserve(1 << 20);
  for (std::size_t c = 0; c < set.chunks.size(); ++c) {
    for (std::size_t i = 0; i < set.chunks[c].instances.size(); ++i) {
      row(buf, c, i);
      buf += '\n';
      if (buf.size() > (1 << 20) - 256) {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

template <typename T>
T parse_number(std::string_view s, const std::string& where) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IngestError(where + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string InstanceHeader::fingerprint() const {
  return fingerprint_bytes(input_fingerprint + "\n" + scheme + "\n" + sampler);
}

InstanceHeader make_header(const std::string& input_fingerprint, const InstanceSet& set) {
  return {input_fingerprint, describe(set.scheme), set.sampler.describe()};
}

void write_instances(std::ostream& out, const TemporalGraph& g, const InstanceSet& set, const InstanceHeader& header) {
  write_header(out, "instances", header);
  out << "chunk_ordinal,src,dst,t,label\n";
  write_rows(out, set, [&](std::string& buf, std::size_t c, std::size_t i) {
    append_row(buf, g, set.chunks[c].instances[i]);
  });
}

void write_scores(std::ostream& out, const TemporalGraph& g, const InstanceSet& set,
                  const std::vector<std::vector<double>>& scores, const InstanceHeader& header) {
  if (scores.size() != set.chunks.size()) throw ConfigError("score table does not match the instance set");
  write_header(out, "scores", header);
  out << "chunk_ordinal,src,dst,t,label,score\n";
  write_rows(out, set, [&](std::string& buf, std::size_t c, std::size_t i) {
    append_row(buf, g, set.chunks[c].instances[i]);
    char num[40];
    const int len = std::snprintf(num, sizeof num, ",%.17g", scores[c][i]);
    buf.append(num, static_cast<std::size_t>(len));
  });
}

ScoreFile parse_score_file(std::string_view text, const TemporalGraph& g,
                           const std::optional<std::string>& expected_fingerprint, const std::string& source_name) {
  std::unordered_map<std::string_view, NodeId> ids;
  ids.reserve(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) ids.emplace(g.labels()[i], static_cast<NodeId>(i));

  ScoreFile file;
  bool saw_columns = false;
  std::size_t pos = 0, line_no = 0;
  std::vector<std::string_view> fields;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto where = source_name + ":" + std::to_string(line_no);
    if (line.front() == '#') {
      constexpr std::string_view key = "# fingerprint=";
      if (line.substr(0, key.size()) == key) file.fingerprint = std::string(line.substr(key.size()));
      continue;
    }
    if (!saw_columns) {
      if (line != "chunk_ordinal,src,dst,t,label,score")
        throw IngestError(where + ": expected header 'chunk_ordinal,src,dst,t,label,score'");
      saw_columns = true;
      continue;
    }
    fields.clear();
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) throw IngestError(where + ": expected 6 columns");
    ScoredInstance row;
    row.instance.chunk_ordinal = parse_number<std::int64_t>(fields[0], where);
    const auto s = ids.find(fields[1]);
    const auto d = ids.find(fields[2]);
    if (s == ids.end() || d == ids.end()) throw IngestError(where + ": unknown node label");
    row.instance.src = s->second;
    row.instance.dst = d->second;
    row.instance.t = parse_number<Timestamp>(fields[3], where);
    if (fields[4] != "0" && fields[4] != "1") throw IngestError(where + ": label must be 0 or 1");
    row.instance.label = fields[4] == "1" ? Label::Positive : Label::Negative;
    row.score = parse_number<double>(fields[5], where);
    if (!std::isfinite(row.score)) throw IngestError(where + ": non-finite score");
    file.rows.push_back(row);
  }
  if (!saw_columns) throw IngestError(source_name + ": missing column header");
  if (expected_fingerprint && file.fingerprint != *expected_fingerprint) {
    throw IngestError(source_name + ": fingerprint '" + file.fingerprint + "' does not match the instance set '" +
                      *expected_fingerprint + "'");
  }
  return file;
}

ScoreFile read_score_file(const std::filesystem::path& path, const TemporalGraph& g,
                          const std::optional<std::string>& expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = std::move(buf).str();
  return parse_score_file(text, g, expected_fingerprint, path.string());
}

}  // namespace linkcast
