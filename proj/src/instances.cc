#include "cnofs/instances.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <numeric>
#include <sstream>

namespace cnofs {

namespace {

std::vector<Challenge> EdgeChallenges(const Graph& graph) {
  std::vector<Challenge> out;
  for (const auto& [u, v] : graph.edges()) out.push_back({u, v});
  return out;
}

ChallengeIndex RequireEdges(const Graph& graph) {
  if (graph.edges().empty()) throw ParseError("graph has no edges");
  return graph.edges().size();
}

std::array<uint8_t, 3> RandomPermutation(Rng& rng) {
  std::array<uint8_t, 3> perm = {0, 1, 2};
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

Bytes ColorMessage(uint8_t color, Rng& rng) {
  Bytes m(1 + ColoringProtocol::kBlindingBytes);
  m[0] = color;
  for (size_t k = 1; k < m.size(); k += 8) {
    uint64_t word = rng();
    for (size_t b = 0; b < 8 && k + b < m.size(); ++b) {
      m[k + b] = static_cast<uint8_t>(word >> (8 * b));
    }
  }
  return m;
}

std::vector<uint64_t> ParseHexFields(std::string_view text, size_t count) {
  std::istringstream in{std::string(text)};
  std::vector<uint64_t> out;
  std::string field;
  while (in >> field) {
    std::string_view digits = field;
    if (digits.starts_with("0x") || digits.starts_with("0X")) digits.remove_prefix(2);
    uint64_t value = 0;
    auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value, 16);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size()) {
      throw ParseError("bad hex field: " + field);
    }
    out.push_back(value);
  }
  if (out.size() != count) {
    throw ParseError("expected " + std::to_string(count) + " hex fields");
  }
  return out;
}

std::string Hex64(uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

}  // namespace

Graph::Graph(uint32_t vertex_count,
             std::vector<std::pair<uint32_t, uint32_t>> edges)
    : vertex_count_(vertex_count) {
  if (vertex_count == 0 || vertex_count > kMaxVertices) {
    throw ParseError("vertex count must be in [1, 64]");
  }
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count || u == v) {
      throw ParseError("bad edge " + std::to_string(u) + " " + std::to_string(v));
    }
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

Bytes Graph::Encode() const {
  Bytes out;
  AppendU8(out, static_cast<uint8_t>(vertex_count_));
  AppendU16(out, static_cast<uint16_t>(edges_.size()));
  for (auto [u, v] : edges_) {
    AppendU8(out, static_cast<uint8_t>(u));
    AppendU8(out, static_cast<uint8_t>(v));
  }
  return out;
}

Graph Graph::Decode(ByteView data) {
  ByteReader reader(data);
  uint32_t vertices = reader.ReadU8();
  uint16_t count = reader.ReadU16();
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint16_t k = 0; k < count; ++k) {
    uint32_t u = reader.ReadU8();
    uint32_t v = reader.ReadU8();
    edges.emplace_back(u, v);
  }
  if (!reader.done()) throw ParseError("trailing bytes after graph");
  Graph graph(vertices, std::move(edges));
  if (graph.Encode() != Bytes(data.begin(), data.end())) {
    throw ParseError("non-canonical graph encoding");
  }
  return graph;
}

std::string Graph::ToText() const {
  std::ostringstream out;
  out << vertex_count_ << ' ' << edges_.size() << '\n';
  for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
  return out.str();
}

Graph Graph::FromText(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long vertices = -1, count = -1;
  if (!(in >> vertices >> count) || vertices < 0 || count < 0) {
    throw ParseError("graph header must be `V E`");
  }
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (long long k = 0; k < count; ++k) {
    long long u = -1, v = -1;
    if (!(in >> u >> v) || u < 0 || v < 0 || u > 255 || v > 255) {
      throw ParseError("bad edge line " + std::to_string(k + 1));
    }
    edges.emplace_back(static_cast<uint32_t>(u), static_cast<uint32_t>(v));
  }
  std::string rest;
  if (in >> rest) throw ParseError("unexpected content after edge list");
  if (vertices > kMaxVertices) throw ParseError("vertex count must be in [1, 64]");
  return Graph(static_cast<uint32_t>(vertices), std::move(edges));
}

bool Graph::IsProperColoring(ByteView coloring) const {
  if (coloring.size() != vertex_count_) return false;
  for (uint8_t c : coloring) {
    if (c > 2) return false;
  }
  for (auto [u, v] : edges_) {
    if (coloring[u] == coloring[v]) return false;
  }
  return true;
}

std::string ColoringToText(ByteView coloring) {
  std::string out;
  for (size_t i = 0; i < coloring.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(coloring[i]);
  }
  out += '\n';
  return out;
}

Bytes ColoringFromText(std::string_view text) {
  std::istringstream in{std::string(text)};
  Bytes out;
  std::string symbol;
  while (in >> symbol) {
    if (symbol != "0" && symbol != "1" && symbol != "2") {
      throw ParseError("color symbols must be 0, 1 or 2");
    }
    out.push_back(static_cast<uint8_t>(symbol[0] - '0'));
  }
  return out;
}

ColoredGraph RandomColorableGraph(uint32_t vertex_count, Rng& rng,
                                  double edge_probability) {
  if (vertex_count < 2) throw ParseError("need at least two vertices");
  std::uniform_int_distribution<int> color(0, 2);
  std::bernoulli_distribution keep(edge_probability);
  Bytes coloring(vertex_count);
  for (auto& c : coloring) c = static_cast<uint8_t>(color(rng));
  // Two distinct colors are guaranteed so that some edge can exist.
  if (std::all_of(coloring.begin(), coloring.end(),
                  [&](uint8_t c) { return c == coloring[0]; })) {
    coloring[1] = static_cast<uint8_t>((coloring[0] + 1) % 3);
  }
  std::vector<std::pair<uint32_t, uint32_t>> edges, candidates;
  for (uint32_t u = 0; u < vertex_count; ++u) {
    for (uint32_t v = u + 1; v < vertex_count; ++v) {
      if (coloring[u] == coloring[v]) continue;
      candidates.emplace_back(u, v);
      if (keep(rng)) edges.emplace_back(u, v);
    }
  }
  if (edges.empty()) {
    edges.push_back(candidates[std::uniform_int_distribution<size_t>(
        0, candidates.size() - 1)(rng)]);
  }
  return {Graph(vertex_count, std::move(edges)), std::move(coloring)};
}

ColoredGraph Triangle() {
  return {Graph(3, {{0, 1}, {0, 2}, {1, 2}}), Bytes{0, 1, 2}};
}

ColoringProtocol::ColoringProtocol(Graph graph)
    : graph_(std::move(graph)),
      encoded_(graph_.Encode()),
      space_(EdgeChallenges(graph_)),
      system_(RequireEdges(graph_), static_cast<uint32_t>(graph_.edges().size())) {}

bool ColoringProtocol::Predicate(ByteView inst, const Challenge& c,
                                 std::span<const Bytes> opened,
                                 ByteView extra) const {
  if (!std::equal(inst.begin(), inst.end(), encoded_.begin(), encoded_.end())) {
    return false;
  }
  if (!extra.empty() || c.size() != 2 || opened.size() != 2) return false;
  if (!std::binary_search(graph_.edges().begin(), graph_.edges().end(),
                          std::make_pair(c[0], c[1]))) {
    return false;
  }
  for (const Bytes& m : opened) {
    if (m.size() != 1 + kBlindingBytes || m[0] > 2) return false;
  }
  return opened[0][0] != opened[1][0];
}

std::optional<Bytes> ColoringProtocol::ExtractFromSet(
    ByteView /*inst*/, const MessageVector& messages, ByteView /*extra*/,
    std::span<const ChallengeIndex> /*set*/) const {
  // The only minimal set is all of E, so every vertex with an edge is opened.
  if (messages.size() != graph_.vertex_count()) return std::nullopt;
  Bytes coloring(graph_.vertex_count(), 0);
  for (size_t i = 0; i < messages.size(); ++i) {
    if (messages[i] && !messages[i]->empty()) coloring[i] = (*messages[i])[0];
  }
  return coloring;
}

bool ColoringProtocol::CheckRelation(ByteView inst, ByteView witness) const {
  return std::equal(inst.begin(), inst.end(), encoded_.begin(), encoded_.end()) &&
         graph_.IsProperColoring(witness);
}

HonestFirstMessage ColoringProtocol::Prepare(ByteView /*inst*/, ByteView witness,
                                             Rng& rng) const {
  if (!graph_.IsProperColoring(witness)) {
    throw NotColorable("witness is not a proper 3-coloring");
  }
  auto perm = RandomPermutation(rng);
  HonestFirstMessage out;
  for (uint8_t color : witness) out.messages.push_back(ColorMessage(perm[color], rng));
  return out;
}

std::pair<std::vector<Bytes>, ChallengeIndex> ColoringProtocol::CheatingMessages(
    ByteView witness, Rng& rng) const {
  if (!graph_.IsProperColoring(witness)) {
    throw NotColorable("witness is not a proper 3-coloring");
  }
  auto perm = RandomPermutation(rng);
  size_t e = std::uniform_int_distribution<size_t>(0, graph_.edges().size() - 1)(rng);
  auto [u, v] = graph_.edges()[e];
  Bytes colors(witness.begin(), witness.end());
  colors[u] = colors[v];
  std::vector<Bytes> messages;
  for (uint8_t color : colors) messages.push_back(ColorMessage(perm[color], rng));
  return {std::move(messages), e};
}

Bytes ColoringProtocol::CollisionCandidate(ByteView message, Rng& rng) {
  return ColorMessage(message.empty() ? 0 : message[0], rng);
}

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

Bytes DlogInstance::Encode() const {
  Bytes out;
  AppendU64(out, group.p);
  AppendU64(out, group.g);
  AppendU64(out, group.q);
  AppendU64(out, x);
  return out;
}

DlogInstance DlogInstance::Decode(ByteView data) {
  ByteReader reader(data);
  DlogInstance inst;
  inst.group.p = reader.ReadU64();
  inst.group.g = reader.ReadU64();
  inst.group.q = reader.ReadU64();
  inst.x = reader.ReadU64();
  if (!reader.done()) throw ParseError("trailing bytes after dlog instance");
  return inst;
}

std::string DlogInstance::ToText() const {
  return Hex64(group.p) + ' ' + Hex64(group.g) + ' ' + Hex64(group.q) + ' ' +
         Hex64(x) + '\n';
}

DlogInstance DlogInstance::FromText(std::string_view text) {
  auto fields = ParseHexFields(text, 4);
  DlogInstance inst;
  inst.group = {fields[0], fields[2], fields[1]};
  inst.x = fields[3];
  return inst;
}

bool DlogInstance::IsValid() const {
  const auto& [p, q, g] = group;
  if (p < 3 || q < 2 || g <= 1 || g >= p || x == 0 || x >= p) return false;
  return PowMod(g, q, p) == 1 && PowMod(x, q, p) == 1;
}

Bytes EncodeScalar(uint64_t w) {
  Bytes out;
  AppendU64(out, w);
  return out;
}

uint64_t DecodeScalar(ByteView data) {
  if (data.size() != 8) throw ParseError("scalar must be 8 bytes");
  ByteReader reader(data);
  return reader.ReadU64();
}

std::string ScalarToText(uint64_t w) { return Hex64(w) + '\n'; }

uint64_t ScalarFromText(std::string_view text) { return ParseHexFields(text, 1)[0]; }

DlogKeyPair RandomDlogInstance(Rng& rng, DlogGroup group) {
  DlogKeyPair out;
  out.w = std::uniform_int_distribution<uint64_t>(1, group.q - 1)(rng);
  out.instance.group = group;
  out.instance.x = PowMod(group.g, out.w, group.p);
  return out;
}

std::pair<Bytes, std::vector<Bytes>> DlogCheatingResponses(const DlogInstance& inst,
                                                          uint32_t b, Rng& rng) {
  const auto& [p, q, g] = inst.group;
  std::uniform_int_distribution<uint64_t> scalar(0, q - 1);
  uint64_t z = scalar(rng);
  uint64_t x_inv = PowMod(inst.x, p - 2, p);
  uint64_t a0 = MulMod(PowMod(g, z, p), b ? x_inv : 1, p);
  std::vector<Bytes> responses(2);
  responses[b & 1] = EncodeScalar(z);
  responses[(b & 1) ^ 1] = EncodeScalar(scalar(rng));
  return {EncodeScalar(a0), std::move(responses)};
}

SigmaCommitment DlogSigma::Commit(ByteView inst, ByteView /*witness*/,
                                  Rng& rng) const {
  DlogInstance x = DlogInstance::Decode(inst);
  uint64_t k = std::uniform_int_distribution<uint64_t>(0, x.group.q - 1)(rng);
  return {EncodeScalar(PowMod(x.group.g, k, x.group.p)), EncodeScalar(k)};
}

Bytes DlogSigma::Respond(ByteView inst, ByteView witness,
                         const SigmaCommitment& commitment,
                         uint32_t challenge) const {
  DlogInstance x = DlogInstance::Decode(inst);
  uint64_t k = DecodeScalar(commitment.state);
  uint64_t w = DecodeScalar(witness) % x.group.q;
  uint64_t z = static_cast<uint64_t>(
      (static_cast<unsigned __int128>(k) + (challenge ? w : 0)) % x.group.q);
  return EncodeScalar(z);
}

bool DlogSigma::Verify(ByteView inst, ByteView first_message, uint32_t challenge,
                       ByteView response) const {
  if (challenge > 1 || first_message.size() != 8 || response.size() != 8) {
    return false;
  }
  DlogInstance x;
  try {
    x = DlogInstance::Decode(inst);
  } catch (const ParseError&) {
    return false;
  }
  const auto& [p, q, g] = x.group;
  if (p < 3 || q < 2) return false;
  uint64_t a0 = DecodeScalar(first_message);
  uint64_t z = DecodeScalar(response);
  if (a0 == 0 || a0 >= p || z >= q) return false;
  uint64_t rhs = challenge ? MulMod(a0, x.x % p, p) : a0;
  return PowMod(g, z, p) == rhs;
}

std::optional<Bytes> DlogSigma::ExtractFromSet(
    ByteView inst, ByteView /*first_message*/, std::span<const ChallengeIndex> set,
    std::span<const Bytes> responses) const {
  if (set.size() != 2 || set[0] != 0 || set[1] != 1) return std::nullopt;
  uint64_t q = DlogInstance::Decode(inst).group.q;
  uint64_t z0 = DecodeScalar(responses[0]);
  uint64_t z1 = DecodeScalar(responses[1]);
  return EncodeScalar((z1 + q - z0 % q) % q);
}

bool DlogSigma::CheckRelation(ByteView inst, ByteView witness) const {
  if (witness.size() != 8) return false;
  DlogInstance x;
  try {
    x = DlogInstance::Decode(inst);
  } catch (const ParseError&) {
    return false;
  }
  uint64_t w = DecodeScalar(witness);
  return w < x.group.q && PowMod(x.group.g, w, x.group.p) == x.x;
}

}  // namespace cnofs
