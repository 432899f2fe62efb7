#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>

#include "cnofs/extract.h"
#include "cnofs/fs.h"
#include "cnofs/instances.h"
#include "cnofs/merkle.h"
#include "cnofs/params.h"
#include "cnofs/unruh.h"

namespace cnofs::cli {

namespace {

class FileError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

Bytes ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

std::string ReadText(const std::string& path) {
  Bytes data = ReadFile(path);
  return std::string(data.begin(), data.end());
}

void WriteFile(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw FileError("cannot write " + path);
}

void WriteText(const std::string& path, const std::string& text) {
  WriteFile(path, ToBytes(text));
}

bool IsColoring(const std::string& scheme) {
  return scheme == "cno" || scheme == "merkle";
}

Mode SchemeMode(const std::string& scheme) {
  return scheme == "merkle" || scheme == "mppu" ? Mode::kMerkle : Mode::kOrdinary;
}

// Everything needed to run one scheme on one instance file.
struct Setup {
  std::string scheme;
  uint32_t reps = 1;
  Bytes inst;
  std::optional<Bytes> witness;
  std::shared_ptr<const ColoringProtocol> coloring;
  std::optional<DlogInstance> dlog;
  std::unique_ptr<FiatShamir> fs;
};

struct CommonOptions {
  std::string scheme = "cno";
  std::string instance;
  std::string witness;
  uint32_t reps = 1;
  size_t n = 256;
  uint64_t seed = 1;
  bool allow_bias = false;
  std::optional<size_t> octopus_bound;
};

void AddCommon(CLI::App* app, CommonOptions& o, bool needs_witness) {
  app->add_option("--scheme", o.scheme, "cno | merkle | unruh | mppu")
      ->check(CLI::IsMember({"cno", "merkle", "unruh", "mppu"}));
  app->add_option("--instance", o.instance, "instance file")->required();
  auto* w = app->add_option("--witness", o.witness, "witness file");
  if (needs_witness) w->required();
  app->add_option("--reps", o.reps, "parallel repetitions r")->check(CLI::Range(1u, 4096u));
  app->add_option("--n", o.n, "oracle output bits (multiple of 8)")
      ->check(CLI::Range(size_t{8}, size_t{1024}));
  app->add_option("--seed", o.seed, "randomness seed");
  app->add_flag("--allow-bias", o.allow_bias,
                "permit n below 64 + log2|C| for challenge derivation");
  app->add_option("--octopus-bound", o.octopus_bound,
                  "merkle/mppu: admit only challenges with at most this many octopus vertices");
}

Setup MakeSetup(const CommonOptions& o) {
  if (o.n % 8 != 0) throw UsageError("--n must be a multiple of 8");
  Setup s;
  s.scheme = o.scheme;
  s.reps = o.reps;
  FsOptions options;
  options.mode = SchemeMode(o.scheme);
  options.allow_biased_gamma = o.allow_bias;
  options.octopus_bound = o.octopus_bound;
  std::string text = ReadText(o.instance);
  std::optional<std::string> witness_text;
  if (!o.witness.empty()) witness_text = ReadText(o.witness);
  try {
    if (IsColoring(o.scheme)) {
      Graph graph = Graph::FromText(text);
      s.coloring = std::make_shared<ColoringProtocol>(graph);
      s.inst = graph.Encode();
      if (witness_text) s.witness = ColoringFromText(*witness_text);
      s.fs = std::make_unique<FiatShamir>(ParallelRepeat(s.coloring, o.reps), options);
    } else {
      s.dlog = DlogInstance::FromText(text);
      if (!s.dlog->IsValid()) throw ParseError("invalid discrete-log instance");
      s.inst = s.dlog->Encode();
      if (witness_text) s.witness = EncodeScalar(ScalarFromText(*witness_text));
      auto base = std::make_shared<PreUnruh>(std::make_shared<DlogSigma>());
      s.fs = std::make_unique<FiatShamir>(ParallelRepeat(base, o.reps), options);
    }
  } catch (const ParseError& e) {
    throw FileError(std::string("malformed input: ") + e.what());
  }
  return s;
}

uint64_t ParseCount(const std::string& text) {
  Rational v = ParseProbability(text);
  if (denominator(v) != 1 || v < 0 ||
      numerator(v) > std::numeric_limits<uint64_t>::max()) {
    throw UsageError("expected a non-negative integer, got " + text);
  }
  return static_cast<uint64_t>(numerator(v));
}

std::string Log2Text(const Rational& v) {
  if (v <= 0) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << Log2(ToBigFloat(v));
  return out.str();
}

std::string Log2Text(const BigFloat& v) {
  if (v <= 0) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << Log2(v);
  return out.str();
}

struct ParamsRow {
  std::string name;
  std::string value;
  std::string log2;
  std::string note;
};

void PrintRows(std::ostream& out, const std::string& inputs,
               const std::vector<ParamsRow>& rows, const std::string& csv_path) {
  size_t width = 8;
  for (const auto& row : rows) width = std::max(width, row.name.size());
  out << "inputs: " << inputs << '\n';
  out << std::left << std::setw(static_cast<int>(width)) << "formula" << "  "
      << std::setw(22) << "value" << "  " << std::setw(12) << "log2" << "  note\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << row.name << "  "
        << std::setw(22) << row.value << "  " << std::setw(12) << row.log2 << "  "
        << row.note << '\n';
  }
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "formula,inputs,value,log2,note\n";
    for (const auto& row : rows) {
      csv << row.name << ",\"" << inputs << "\"," << row.value << ',' << row.log2
          << ',' << row.note << '\n';
    }
    WriteText(csv_path, csv.str());
  }
}

struct ParamsOptions {
  std::string formula;
  uint64_t ell = 64;
  std::string q = "2^20";
  uint32_t n = 256;
  std::string ptriv = "2^-128";
  uint32_t r = 1;
  uint64_t l0 = 2;
  uint64_t kappa = 1;
  std::string eps = "2^-10";
  uint64_t challenges = 2;
  std::string csv;
};

int RunParams(const ParamsOptions& o, std::ostream& out) {
  BoundInput in;
  in.ell = o.ell;
  in.q = ParseCount(o.q);
  in.n = o.n;
  in.p_triv = ParseProbability(o.ptriv);
  in.r = o.r;
  in.l0 = o.l0;
  in.kappa = o.kappa;
  in.challenge_count = o.challenges;
  ValidateBoundInput(in);

  std::ostringstream inputs;
  inputs << "l=" << in.ell << " q=" << in.q << " n=" << in.n << " ptriv=" << o.ptriv
         << " r=" << in.r << " l0=" << in.l0 << " kappa=" << in.kappa;
  std::vector<ParamsRow> rows;
  auto bound_row = [](const std::string& name, const Bound& b) {
    return ParamsRow{name, FormatSci(b.value, 15), Log2Text(b.value),
                     b.exact ? "exact" : "rounded"};
  };
  if (o.formula == "thm3" || o.formula == "thm4") {
    TwoFormBound b = o.formula == "thm3" ? EpsExOrdinary(in) : EpsExMerkle(in);
    rows.push_back(bound_row(o.formula, b.simplified));
    rows.push_back({o.formula + "-unsimplified", FormatSci(b.unsimplified, 15),
                    Log2Text(b.unsimplified),
                    b.simplified_dominates ? "closed form dominates"
                                           : "closed form below unsimplified"});
  } else if (o.formula == "cor2") {
    rows.push_back(bound_row("cor2", EpsUnruh(in)));
  } else if (o.formula == "cor3") {
    rows.push_back(bound_row("cor3", EpsMppu(in)));
  } else if (o.formula == "lemma3" || o.formula == "lemma4") {
    BigFloat v = CapacityBound(in, o.formula == "lemma3" ? CommitmentVariant::kOrdinary
                                                         : CommitmentVariant::kMerkle);
    rows.push_back({o.formula, FormatSci(v, 15), Log2Text(v), "rounded"});
  } else {
    Rational eps = ParseProbability(o.eps);
    inputs << " eps=" << o.eps << " C=" << in.challenge_count;
    for (const Table1Row& row : Table1Compare(eps, in)) {
      std::string note = row.asymptotic ? "big-O constant 1" : "exact constants";
      if (row.vacuous) {
        note += "; vacuous";
      } else if (row.below_collision_level) {
        note += "; below 2^-(n/3)";
      }
      rows.push_back({row.name, FormatSci(ToBigFloat(row.value), 15),
                      Log2Text(row.value), note});
    }
  }
  PrintRows(out, inputs.str(), rows, o.csv);
  return kOk;
}

struct BenchOptions {
  uint32_t ell = 8;
  uint32_t kappa = 1;
  bool exhaustive = false;
  uint64_t samples = 100000;
  uint64_t seed = 1;
};

int RunBenchOctopus(const BenchOptions& o, std::ostream& out) {
  if (o.kappa == 0 || o.kappa > o.ell) throw UsageError("need 1 <= kappa <= l");
  KSubsetSpace space(o.ell, o.kappa);
  uint32_t h = TreeHeight(o.ell);
  Rng rng(o.seed);
  OctoStats stats = ComputeOctoStats(space, h, rng, o.samples, o.exhaustive);
  out << "l=" << o.ell << " kappa=" << o.kappa << " h=" << h
      << " |C|=" << ToString(space.size()) << '\n';
  out << (stats.exhaustive ? "exhaustive" : "sampled") << " over " << stats.samples
      << " challenges\n";
  out << "octopus size: min " << stats.min << "  mean " << std::fixed
      << std::setprecision(3) << stats.mean << "  max " << stats.max << '\n';
  out << "size  count\n";
  for (const auto& [size, count] : stats.histogram) {
    out << std::setw(4) << size << "  " << count << '\n';
  }
  out << "\ncommitment bytes per proof (ordinary vs merkle root + octopus)\n";
  out << "   n  ordinary  merkle-mean  merkle-max  smaller\n";
  for (unsigned n : {128u, 192u, 256u}) {
    double digest = n / 8.0;
    double entry = digest + 1 + (h + 7) / 8;
    double ordinary = digest * o.ell;
    double mean = digest + 2 + stats.mean * entry;
    double worst = digest + 2 + static_cast<double>(stats.max) * entry;
    out << std::setw(4) << n << "  " << std::setw(8) << std::setprecision(0) << ordinary
        << "  " << std::setw(11) << std::setprecision(1) << mean << "  "
        << std::setw(10) << std::setprecision(0) << worst << "  "
        << (worst < ordinary ? "merkle" : (mean < ordinary ? "merkle (mean)" : "ordinary"))
        << '\n';
  }
  return kOk;
}

struct ExtractOptions {
  CommonOptions common;
  uint64_t trials = 100;
  std::string adversary = "honest";
  std::string budget = "1024";
  unsigned threads = 0;
  std::string dump_db;
  std::string csv;
};

std::unique_ptr<Prover> MakeProver(const Setup& s, const std::string& adversary,
                                   uint64_t budget) {
  auto need_witness = [&]() -> const Bytes& {
    if (!s.witness) throw UsageError("--adversary " + adversary + " needs --witness");
    return *s.witness;
  };
  if (adversary == "honest") {
    return std::make_unique<HonestProver>(*s.fs, s.inst, need_witness());
  }
  if (adversary == "garbage") return std::make_unique<GarbageProver>(s.inst);
  if (adversary == "grind") {
    GrindingProver::MessageSource source;
    Bytes prefix;
    if (s.coloring) {
      Bytes witness = need_witness();
      auto coloring = s.coloring;
      uint32_t reps = s.reps;
      source = [coloring, witness, reps](Rng& rng) {
        std::vector<Bytes> all;
        for (uint32_t j = 0; j < reps; ++j) {
          auto [messages, edge] = coloring->CheatingMessages(witness, rng);
          for (auto& m : messages) all.push_back(std::move(m));
        }
        return all;
      };
      std::vector<Bytes> empty(s.reps);
      prefix = ParallelRepetition::EncodeExtra(empty);
      return std::make_unique<GrindingProver>(*s.fs, s.inst, source, prefix, budget);
    }
    // Pre-Unruh: each repetition answers one random bit. The first messages
    // depend on the randomness, so they are fixed from the seed up front.
    Rng setup_rng(budget ^ 0x6772696e64ULL);
    std::vector<Bytes> extras, messages;
    for (uint32_t j = 0; j < s.reps; ++j) {
      uint32_t b = static_cast<uint32_t>(setup_rng() & 1);
      auto [a0, responses] = DlogCheatingResponses(*s.dlog, b, setup_rng);
      extras.push_back(a0);
      for (auto& z : responses) messages.push_back(std::move(z));
    }
    prefix = ParallelRepetition::EncodeExtra(extras);
    source = [messages](Rng&) { return messages; };
    return std::make_unique<GrindingProver>(*s.fs, s.inst, source, prefix, budget);
  }
  // collide
  if (!s.coloring) throw UsageError("--adversary collide needs --scheme cno or merkle");
  return std::make_unique<CollidingProver>(
      *s.fs, s.inst, need_witness(), 0,
      [](const Bytes& honest, Rng& rng) {
        return ColoringProtocol::CollisionCandidate(honest, rng);
      },
      budget);
}

int RunExtract(const ExtractOptions& o, std::ostream& out) {
  Setup s = MakeSetup(o.common);
  uint64_t budget = ParseCount(o.budget);
  std::unique_ptr<Prover> prover = MakeProver(s, o.adversary, budget);
  auto reports = RunTrials(*prover, *s.fs, o.common.n, o.trials, o.common.seed, o.threads);

  uint64_t accepted = 0, extracted = 0, failed = 0, suc = 0, cl = 0, success = 0;
  out << "# trial_id, v, extracted, suc, cl, db_size, q_used\n";
  for (const auto& report : reports) {
    WriteTrialReport(out, report);
    const auto& r = report.outcome;
    accepted += r.accepted;
    extracted += r.witness.has_value();
    failed += r.accepted && !r.witness;
    suc += r.suc;
    cl += r.cl;
    bool hit = r.accepted;
    if (o.adversary == "collide") hit = hit && !r.aux.empty() && r.aux[0] == 1;
    success += hit;
  }
  double n = static_cast<double>(std::max<uint64_t>(o.trials, 1));
  out << "\ntrials            " << o.trials << '\n'
      << "accepted          " << accepted << '\n'
      << "extracted         " << extracted << '\n'
      << "accepted, no wit. " << failed << '\n'
      << "suc               " << suc << '\n'
      << "cl                " << cl << '\n'
      << "adversary success " << success << "  (rate " << std::fixed
      << std::setprecision(4) << success / n << ")\n";
  if (!o.csv.empty()) {
    std::ostringstream csv;
    csv << "scheme,adversary,trials,accepted,extracted,accepted_no_witness,suc,cl,success\n"
        << o.common.scheme << ',' << o.adversary << ',' << o.trials << ',' << accepted
        << ',' << extracted << ',' << failed << ',' << suc << ',' << cl << ','
        << success << '\n';
    WriteText(o.csv, csv.str());
  }
  if (!o.dump_db.empty() && o.trials > 0) {
    Database db;
    OnlineExtract(*prover, *s.fs, o.common.n, TrialSeed(o.common.seed, 0), std::nullopt,
                  &db);
    std::ostringstream dump;
    db.Dump(dump);
    WriteText(o.dump_db, dump.str());
  }
  return kOk;
}

struct GenOptions {
  std::string kind = "coloring";
  uint32_t vertices = 12;
  double edge_probability = 0.5;
  uint64_t seed = 1;
  std::string instance;
  std::string witness;
};

int RunGen(const GenOptions& o, std::ostream& out) {
  Rng rng(o.seed);
  if (o.kind == "dlog") {
    DlogKeyPair key = RandomDlogInstance(rng);
    WriteText(o.instance, key.instance.ToText());
    WriteText(o.witness, ScalarToText(key.w));
  } else {
    ColoredGraph g = o.kind == "triangle"
                         ? Triangle()
                         : RandomColorableGraph(o.vertices, rng, o.edge_probability);
    WriteText(o.instance, g.graph.ToText());
    WriteText(o.witness, ColoringToText(g.coloring));
  }
  out << "wrote " << o.instance << " and " << o.witness << '\n';
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Commit-and-open proofs, Fiat-Shamir and online extraction"};
  app.name("cnofs");
  app.require_subcommand(1);

  CommonOptions prove_opts;
  std::string proof_out;
  auto* prove = app.add_subcommand("prove", "produce a non-interactive proof");
  AddCommon(prove, prove_opts, true);
  prove->add_option("--out", proof_out, "proof output file")->required();

  CommonOptions verify_opts;
  std::string proof_in;
  auto* verify = app.add_subcommand("verify", "check a proof (exit 0 accept, 1 reject)");
  AddCommon(verify, verify_opts, false);
  verify->add_option("--proof", proof_in, "proof file")->required();

  CommonOptions sign_opts;
  std::string sign_msg, sign_out;
  auto* sign = app.add_subcommand("sign", "sign a message file");
  AddCommon(sign, sign_opts, true);
  sign->add_option("--msg", sign_msg, "message file")->required();
  sign->add_option("--out", sign_out, "signature output file")->required();

  CommonOptions sv_opts;
  std::string sv_msg, sv_sig;
  auto* sig_verify =
      app.add_subcommand("sig-verify", "check a signature (exit 0 accept, 1 reject)");
  AddCommon(sig_verify, sv_opts, false);
  sig_verify->add_option("--msg", sv_msg, "message file")->required();
  sig_verify->add_option("--proof", sv_sig, "signature file")->required();

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "run the online extractor on many trials");
  AddCommon(extract, ex.common, false);
  extract->add_option("--trials", ex.trials, "number of trials");
  extract->add_option("--adversary", ex.adversary, "honest | grind | collide | garbage")
      ->check(CLI::IsMember({"honest", "grind", "collide", "garbage"}));
  extract->add_option("--budget", ex.budget, "adversary attempts q (e.g. 1024 or 2^10)");
  extract->add_option("--threads", ex.threads, "worker threads (0 = all cores)");
  extract->add_option("--dump-db", ex.dump_db, "write trial 0's oracle database here");
  extract->add_option("--csv", ex.csv, "write summary statistics as CSV");

  ParamsOptions po;
  auto* params = app.add_subcommand("params", "evaluate extraction-error bounds");
  params->add_option("--formula", po.formula)
      ->required()
      ->check(CLI::IsMember({"thm3", "thm4", "cor2", "cor3", "lemma3", "lemma4", "table1"}));
  params->add_option("--l", po.ell, "committed messages l");
  params->add_option("--q", po.q, "oracle queries (integer or 2^k)");
  params->add_option("--n", po.n, "oracle output bits");
  params->add_option("--ptriv", po.ptriv, "trivial-attack probability (2^-k, a/b, decimal)");
  params->add_option("--r", po.r, "repetitions");
  params->add_option("--l0", po.l0, "challenges of the underlying sigma protocol");
  params->add_option("--kappa", po.kappa, "max opened messages");
  params->add_option("--eps", po.eps, "adversary success probability (table1)");
  params->add_option("--C", po.challenges, "challenge space size per repetition (table1)");
  params->add_option("--csv", po.csv, "also write comma-separated records");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "benchmarks");
  bench->require_subcommand(1);
  auto* octopus = bench->add_subcommand("octopus", "octopus size distribution");
  octopus->add_option("--l", bo.ell, "committed messages l (the tree pads to a power of two)")->required();
  octopus->add_option("--kappa", bo.kappa, "opened leaves per challenge")->required();
  octopus->add_flag("--exhaustive", bo.exhaustive, "enumerate every challenge");
  octopus->add_option("--samples", bo.samples, "Monte-Carlo samples");
  octopus->add_option("--seed", bo.seed, "sampling seed");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "generate an instance and witness");
  gen->add_option("--kind", go.kind, "coloring | triangle | dlog")
      ->check(CLI::IsMember({"coloring", "triangle", "dlog"}));
  gen->add_option("--vertices", go.vertices, "graph size")->check(CLI::Range(uint32_t{2}, kMaxVertices));
  gen->add_option("--edge-prob", go.edge_probability, "edge probability");
  gen->add_option("--seed", go.seed, "seed");
  gen->add_option("--instance", go.instance, "instance output file")->required();
  gen->add_option("--witness", go.witness, "witness output file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*prove) {
      Setup s = MakeSetup(prove_opts);
      ConcreteOracle oracle(prove_opts.n);
      Rng rng(prove_opts.seed);
      Bytes proof = SerializeProof(s.fs->Prove(oracle, s.inst, *s.witness, rng));
      WriteFile(proof_out, proof);
      out << "wrote " << proof.size() << " bytes to " << proof_out << '\n';
      return kOk;
    }
    if (*verify) {
      Setup s = MakeSetup(verify_opts);
      ConcreteOracle oracle(verify_opts.n);
      bool ok = s.fs->Verify(oracle, s.inst, ReadFile(proof_in));
      out << (ok ? "accept" : "reject") << '\n';
      return ok ? kOk : kReject;
    }
    if (*sign) {
      Setup s = MakeSetup(sign_opts);
      ConcreteOracle oracle(sign_opts.n);
      Rng rng(sign_opts.seed);
      Bytes sig = SerializeProof(
          s.fs->Sign(oracle, s.inst, *s.witness, ReadFile(sign_msg), rng));
      WriteFile(sign_out, sig);
      out << "wrote " << sig.size() << " bytes to " << sign_out << '\n';
      return kOk;
    }
    if (*sig_verify) {
      Setup s = MakeSetup(sv_opts);
      ConcreteOracle oracle(sv_opts.n);
      bool ok = s.fs->SigVerify(oracle, s.inst, ReadFile(sv_msg), ReadFile(sv_sig));
      out << (ok ? "accept" : "reject") << '\n';
      return ok ? kOk : kReject;
    }
    if (*extract) return RunExtract(ex, out);
    if (*params) return RunParams(po, out);
    if (*octopus) return RunBenchOctopus(bo, out);
    if (*gen) return RunGen(go, out);
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kFile;
  } catch (const BiasBudgetViolated& e) {
    err << "error: " << e.what() << " (raise --n or pass --allow-bias)\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace cnofs::cli
