#include "pownum/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pownum/abc.hpp"
#include "pownum/additive.hpp"
#include "pownum/ap.hpp"
#include "pownum/arith.hpp"
#include "pownum/checkpoint.hpp"
#include "pownum/powerful.hpp"
#include "pownum/records.hpp"
#include "pownum/sequence.hpp"

namespace pownum::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::set<std::string> kBoolFlags = {"json", "records", "resume", "strict", "help"};

struct Args {
  std::vector<std::string> pos;
  std::map<std::string, std::string> kv;
  std::set<std::string> flags;

  bool has(const std::string& f) const { return flags.count(f) > 0 || kv.count(f) > 0; }
};

Args parse_tokens(const std::vector<std::string>& tokens, size_t from) {
  Args a;
  for (size_t i = from; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t == "-h" || t == "--help") {
      a.flags.insert("help");
    } else if (t.rfind("--", 0) == 0) {
      const std::string name = t.substr(2);
      if (name.empty()) throw UsageError("empty flag");
      if (kBoolFlags.count(name)) {
        a.flags.insert(name);
      } else {
        if (i + 1 >= tokens.size())
          throw UsageError("flag --" + name + " requires a value");
        a.kv[name] = tokens[++i];
      }
    } else {
      a.pos.push_back(t);
    }
  }
  return a;
}

void check_flags(const Args& a, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : a.kv) {
    (void)v;
    if (!allowed.count(k)) throw UsageError("unknown flag --" + k);
  }
  for (const auto& f : a.flags) {
    if (f == "help") continue;
    if (!allowed.count(f)) throw UsageError("unknown flag --" + f);
  }
}

uint64_t parse_u64(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(what + ": expected a nonnegative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw UsageError(what + ": value out of range: '" + s + "'");
  }
}

int64_t parse_i64(const std::string& s, const std::string& what) {
  const bool neg = !s.empty() && s[0] == '-';
  const std::string digits = neg ? s.substr(1) : s;
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(what + ": expected an integer, got '" + s + "'");
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    throw UsageError(what + ": value out of range: '" + s + "'");
  }
}

uint64_t get_u64(const Args& a, const std::string& name,
                 std::optional<uint64_t> def = std::nullopt) {
  auto it = a.kv.find(name);
  if (it == a.kv.end()) {
    if (def) return *def;
    throw UsageError("missing required flag --" + name);
  }
  return parse_u64(it->second, "--" + name);
}

int64_t get_i64(const Args& a, const std::string& name,
                std::optional<int64_t> def = std::nullopt) {
  auto it = a.kv.find(name);
  if (it == a.kv.end()) {
    if (def) return *def;
    throw UsageError("missing required flag --" + name);
  }
  return parse_i64(it->second, "--" + name);
}

mpz_class parse_mpz(const std::string& s, const std::string& what) {
  const bool neg = !s.empty() && s[0] == '-';
  const std::string digits = neg ? s.substr(1) : s;
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(what + ": expected an integer, got '" + s + "'");
  mpz_class v;
  v.set_str(s, 10);
  return v;
}

mpz_class get_mpz(const Args& a, const std::string& name) {
  auto it = a.kv.find(name);
  if (it == a.kv.end()) throw UsageError("missing required flag --" + name);
  return parse_mpz(it->second, "--" + name);
}

// Thresholds are exact rationals "P/Q" (or a bare integer "P"); floats are
// rejected so threshold comparisons stay exact.
abc::RationalThreshold parse_rational(const std::string& s, const std::string& what) {
  const auto slash = s.find('/');
  const std::string ns = slash == std::string::npos ? s : s.substr(0, slash);
  const std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (ns.empty() || ds.empty() ||
      ns.find_first_not_of("0123456789") != std::string::npos ||
      ds.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(what + ": expected an exact rational P/Q, got '" + s + "'");
  const uint64_t num = parse_u64(ns, what);
  const uint64_t den = parse_u64(ds, what);
  if (den == 0) throw UsageError(what + ": denominator must be nonzero");
  if (num > 1000 || den > 1000)
    throw UsageError(what + ": numerator and denominator are capped at 1000");
  return abc::make_rational(num, den);
}

abc::RationalThreshold get_rational(const Args& a, const std::string& name,
                                    std::optional<abc::RationalThreshold> def) {
  auto it = a.kv.find(name);
  if (it == a.kv.end()) {
    if (def) return *def;
    throw UsageError("missing required flag --" + name);
  }
  return parse_rational(it->second, "--" + name);
}

struct CommonOpts {
  Format format = Format::Table;
  arith::EffortBudget effort;
  bool strict = false;
  unsigned threads = 1;
  std::string checkpoint;
  bool resume = false;
  uint64_t stop_after = 0;
};

CommonOpts common_opts(const Args& a) {
  CommonOpts o;
  if (a.flags.count("json") && a.flags.count("records"))
    throw UsageError("--json and --records are mutually exclusive");
  if (a.flags.count("json")) o.format = Format::Json;
  if (a.flags.count("records")) o.format = Format::Records;
  o.strict = a.flags.count("strict") > 0;
  o.effort.rng_seed = get_u64(a, "seed", uint64_t{0});
  o.effort.trial_division_bound = get_u64(a, "trial-bound", uint64_t{1'000'000});
  if (o.effort.trial_division_bound < 2)
    throw UsageError("--trial-bound must be >= 2");
  o.effort.rho_iteration_budget = get_u64(a, "rho-budget", uint64_t{10'000'000});
  o.threads = static_cast<unsigned>(
      std::clamp<uint64_t>(get_u64(a, "threads", uint64_t{1}), 1, 64));
  auto it = a.kv.find("checkpoint");
  if (it != a.kv.end()) o.checkpoint = it->second;
  o.resume = a.flags.count("resume") > 0;
  if (o.resume && o.checkpoint.empty())
    throw UsageError("--resume requires --checkpoint PATH");
  o.stop_after = get_u64(a, "stop-after", uint64_t{0});
  return o;
}

const std::set<std::string> kValueFlags = {"seed",   "trial-bound", "rho-budget",
                                           "json",   "records",     "strict"};
const std::set<std::string> kSearchFlags = {"seed",       "trial-bound", "rho-budget",
                                            "json",       "records",     "strict",
                                            "checkpoint", "resume",      "stop-after",
                                            "threads"};

std::set<std::string> with(std::set<std::string> base,
                           std::initializer_list<const char*> extra) {
  for (const char* e : extra) base.insert(e);
  return base;
}

std::string format_tag(Format f) {
  switch (f) {
    case Format::Table:
      return "table";
    case Format::Records:
      return "records";
    case Format::Json:
      return "json";
  }
  return "?";
}

std::string effort_tag(const arith::EffortBudget& e) {
  return std::to_string(e.rng_seed) + "/" + std::to_string(e.trial_division_bound) +
         "/" + std::to_string(e.rho_iteration_budget);
}

bool want_color(const CommonOpts& o, const std::ostream& out) {
  return o.format == Format::Table && &out == &std::cout &&
         isatty(fileno(stdout)) != 0 && std::getenv("NO_COLOR") == nullptr;
}

// ---------------------------------------------------------------------------
// Partitioned range driver with checkpoint/resume and ordered parallelism.

struct ResumeState {
  uint64_t cursor = 0;   // next unprocessed range value
  uint64_t hits = 0;     // records produced by earlier invocations
  bool midway = false;   // true when continuing past the range start
};

ResumeState init_resume(const CommonOpts& o, const std::string& signature,
                        uint64_t lo) {
  ResumeState rs;
  rs.cursor = lo;
  if (o.checkpoint.empty() || !o.resume) return rs;
  auto cp = load_checkpoint(o.checkpoint);
  if (!cp) return rs;  // nothing saved yet: start fresh
  if (cp->command_signature != signature_hash(signature))
    throw UsageError("checkpoint at " + o.checkpoint +
                     " belongs to a different command line");
  rs.cursor = cp->cursor;
  rs.hits = cp->hits_emitted;
  rs.midway = rs.cursor > lo;
  return rs;
}

// consume returns the number of hits the partition contributed.
template <typename T>
struct Partitioned {
  uint64_t lo = 0, hi = 0, chunk = 1;
  std::function<std::vector<T>(uint64_t, uint64_t)> produce;
  std::function<uint64_t(std::vector<T>&&)> consume;
  bool defer_final_checkpoint = false;
};

// Returns true when the whole range was processed (false: stopped early).
template <typename T>
bool run_partitions(const Partitioned<T>& p, const CommonOpts& o,
                    const std::string& signature, ResumeState& rs) {
  if (rs.cursor > p.hi) return true;
  const std::string sig = signature_hash(signature);
  const uint64_t nparts = (p.hi - p.lo) / p.chunk + 1;
  auto bounds = [&](uint64_t idx) {
    const uint64_t plo = p.lo + idx * p.chunk;
    const uint64_t phi = std::min(p.hi, plo + p.chunk - 1);
    return std::make_pair(plo, phi);
  };
  auto save = [&](uint64_t cursor) {
    if (o.checkpoint.empty()) return;
    save_checkpoint(o.checkpoint, Checkpoint{1, sig, cursor, rs.hits});
  };

  uint64_t next = (rs.cursor - p.lo) / p.chunk;
  uint64_t processed = 0;
  auto finish_partition = [&](uint64_t idx, std::vector<T>&& items) {
    rs.hits += p.consume(std::move(items));
    const uint64_t phi = bounds(idx).second;
    rs.cursor = phi + 1;
    if (!(p.defer_final_checkpoint && idx + 1 == nparts)) save(rs.cursor);
    ++processed;
  };

  if (o.threads <= 1) {
    for (uint64_t idx = next; idx < nparts; ++idx) {
      auto [plo, phi] = bounds(idx);
      finish_partition(idx, p.produce(plo, phi));
      if (o.stop_after && processed >= o.stop_after && idx + 1 < nparts) return false;
    }
    return true;
  }

  std::deque<std::pair<uint64_t, std::future<std::vector<T>>>> inflight;
  uint64_t submit = next;
  while (submit < nparts || !inflight.empty()) {
    while (inflight.size() < o.threads && submit < nparts) {
      auto [plo, phi] = bounds(submit);
      inflight.emplace_back(submit, std::async(std::launch::async, p.produce, plo, phi));
      ++submit;
    }
    auto [idx, fut] = std::move(inflight.front());
    inflight.pop_front();
    finish_partition(idx, fut.get());
    if (o.stop_after && processed >= o.stop_after && idx + 1 < nparts) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Record builders

std::string verdict_status(const powerful::PowerfulVerdict& v) {
  switch (v.status) {
    case powerful::Status::Powerful:
      return "powerful";
    case powerful::Status::NotPowerful:
      return "not_powerful";
    case powerful::Status::Undecided:
      return "undecided";
  }
  return "?";
}

std::string factors_compact(const arith::Factorization& f) {
  if (f.factors.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < f.factors.size(); ++i) {
    if (i) s += '*';
    s += f.factors[i].prime.get_str();
    if (f.factors[i].exponent > 1) s += '^' + std::to_string(f.factors[i].exponent);
  }
  return s;
}

std::string factors_pretty(const arith::Factorization& f) {
  if (f.factors.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < f.factors.size(); ++i) {
    if (i) s += " * ";
    s += f.factors[i].prime.get_str();
    if (f.factors[i].exponent > 1) s += '^' + std::to_string(f.factors[i].exponent);
  }
  return s;
}

int finish_exit(const CommonOpts& o, uint64_t undecided) {
  return (o.strict && undecided > 0) ? 3 : 0;
}

// ---------------------------------------------------------------------------
// Single-value commands

int cmd_factor(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() != 2) throw UsageError("usage: factor N");
  const mpz_class n = parse_mpz(a.pos[1], "factor");
  const arith::FactorResult res = arith::factorize(n, o.effort);
  const bool undecided = !res.complete();
  if (o.format == Format::Json) {
    nlohmann::ordered_json j;
    j["n"] = n.get_str();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& pp : res.factorization.factors)
      arr.push_back({pp.prime.get_str(), pp.exponent});
    j["factors"] = arr;
    j["cofactor"] = res.cofactor.get_str();
    j["status"] = undecided ? "undecided" : "complete";
    out << j.dump() << '\n';
  } else if (o.format == Format::Records) {
    Record r;
    r.kind = "factor";
    r.add("n", n).add("factors", factors_compact(res.factorization));
    r.add("status", std::string(undecided ? "undecided" : "complete"));
    if (undecided) r.add("cofactor", res.cofactor);
    out << to_kv_line(r) << '\n';
  } else {
    out << n << " = " << factors_pretty(res.factorization);
    if (undecided) out << " * [" << res.cofactor << " unfactored composite]";
    out << '\n';
  }
  return finish_exit(o, undecided ? 1 : 0);
}

int cmd_rad(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() != 2) throw UsageError("usage: rad N");
  const mpz_class n = parse_mpz(a.pos[1], "rad");
  const arith::RadicalResult r = arith::radical(n, o.effort);
  const bool undecided = !r.complete();
  if (o.format == Format::Json) {
    nlohmann::ordered_json j;
    j["n"] = n.get_str();
    j["rad"] = r.value.get_str();
    j["status"] = undecided ? "undecided" : "exact";
    if (undecided) j["cofactor"] = r.cofactor.get_str();
    out << j.dump() << '\n';
  } else if (o.format == Format::Records) {
    Record rec;
    rec.kind = "rad";
    rec.add("n", n).add("rad", r.value);
    rec.add("status", std::string(undecided ? "undecided" : "exact"));
    if (undecided) rec.add("cofactor", r.cofactor);
    out << to_kv_line(rec) << '\n';
  } else if (undecided) {
    out << ">= " << r.value << " (cofactor " << r.cofactor << " unfactored)\n";
  } else {
    out << r.value << '\n';
  }
  return finish_exit(o, undecided ? 1 : 0);
}

int cmd_primorial(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() != 2) throw UsageError("usage: primorial X");
  const uint64_t x = parse_u64(a.pos[1], "primorial");
  const mpz_class v = arith::primorial(x);
  if (o.format == Format::Json) {
    nlohmann::ordered_json j;
    j["x"] = x;
    j["primorial"] = v.get_str();
    out << j.dump() << '\n';
  } else if (o.format == Format::Records) {
    Record r;
    r.kind = "primorial";
    r.add("x", x).add("value", v);
    out << to_kv_line(r) << '\n';
  } else {
    out << v << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// powerful subcommands

Record powerful_value_record(uint64_t v) {
  Record r;
  r.kind = "powerful";
  r.add("x", v);
  return r;
}

int cmd_powerful(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() < 2)
    throw UsageError("usage: powerful list|count|verdict|dominated ...");
  const std::string& sub = a.pos[1];
  if (sub == "list") {
    const uint64_t limit = get_u64(a, "limit");
    if (limit < 1) throw UsageError("--limit must be >= 1");
    const std::string signature = "powerful list limit=" + std::to_string(limit) +
                                  " chunk=65536 fmt=" + format_tag(o.format);
    ResumeState rs = init_resume(o, signature, 1);
    Sink sink(out, o.format, {"x"}, want_color(o, out), rs.midway);
    Partitioned<uint64_t> p;
    p.lo = 1;
    p.hi = limit;
    p.chunk = 65536;
    p.produce = [](uint64_t lo, uint64_t hi) {
      return powerful::enumerate_powerful_range(lo, hi);
    };
    p.consume = [&](std::vector<uint64_t>&& vs) {
      for (uint64_t v : vs) sink.emit(powerful_value_record(v));
      sink.flush();
      return vs.size();
    };
    run_partitions(p, o, signature, rs);
    return finish_exit(o, sink.undecided());
  }
  if (sub == "count") {
    const uint64_t limit = get_u64(a, "limit");
    if (limit < 1) throw UsageError("--limit must be >= 1");
    out << powerful::count_powerful(limit) << '\n';
    return 0;
  }
  if (sub == "verdict") {
    if (a.pos.size() != 3) throw UsageError("usage: powerful verdict X");
    const mpz_class x = parse_mpz(a.pos[2], "powerful verdict");
    const powerful::PowerfulVerdict v = powerful::powerful_verdict(x, o.effort);
    if (o.format == Format::Json) {
      nlohmann::ordered_json j;
      j["kind"] = "powerful";
      j["x"] = x.get_str();
      j["status"] = verdict_status(v);
      if (v.status == powerful::Status::NotPowerful)
        j["witness"] = v.witness_prime.get_str();
      if (v.status == powerful::Status::Powerful)
        j["certificate"] = factors_compact(v.certificate);
      if (v.status == powerful::Status::Undecided) {
        j["factored"] = factors_compact(v.certificate);
        j["cofactor"] = v.residual_cofactor.get_str();
      }
      out << j.dump() << '\n';
    } else if (o.format == Format::Records) {
      Record r;
      r.kind = "powerful";
      r.add("x", x).add("status", verdict_status(v));
      if (v.status == powerful::Status::NotPowerful) r.add("witness", v.witness_prime);
      if (v.status == powerful::Status::Undecided) r.add("cofactor", v.residual_cofactor);
      out << to_kv_line(r) << '\n';
    } else {
      switch (v.status) {
        case powerful::Status::Powerful:
          out << "powerful: " << x << " = " << factors_pretty(v.certificate) << '\n';
          break;
        case powerful::Status::NotPowerful:
          out << "not powerful: " << v.witness_prime << " divides " << x
              << " exactly once\n";
          break;
        case powerful::Status::Undecided:
          out << "undecided: factored part " << factors_pretty(v.certificate)
              << ", cofactor " << v.residual_cofactor << " resisted the budget\n";
          break;
      }
    }
    return finish_exit(o, v.status == powerful::Status::Undecided ? 1 : 0);
  }
  if (sub == "dominated") {
    if (a.pos.size() != 3) throw UsageError("usage: powerful dominated X");
    const mpz_class x = parse_mpz(a.pos[2], "powerful dominated");
    try {
      const bool dom = powerful::radical_dominated(x, o.effort);
      const mpz_class r = arith::radical_exact(x, o.effort);
      if (o.format == Format::Json) {
        nlohmann::ordered_json j;
        j["x"] = x.get_str();
        j["rad"] = r.get_str();
        j["dominated"] = dom;
        out << j.dump() << '\n';
      } else if (o.format == Format::Records) {
        Record rec;
        rec.kind = "dominated";
        rec.add("x", x).add("rad", r).add("dominated", std::string(dom ? "true" : "false"));
        out << to_kv_line(rec) << '\n';
      } else {
        out << (dom ? "yes" : "no") << ": rad(" << x << ")^2 = " << r * r
            << (dom ? " <= " : " > ") << x << '\n';
      }
      return 0;
    } catch (const UndecidedError& e) {
      out << "undecided: cofactor " << e.cofactor() << " resisted the budget\n";
      return o.strict ? 3 : 0;
    }
  }
  throw UsageError("unknown powerful subcommand '" + sub + "'");
}

// ---------------------------------------------------------------------------
// abc subcommands (hits buffer output for the final quality sort)

Record abc_record(const abc::AbcTriple& t) {
  Record r;
  r.kind = "abc_hit";
  r.add("a", t.a).add("b", t.b).add("c", t.c).add("rad", t.rad_abc);
  r.add("quality", Quality{t.quality});
  return r;
}

int cmd_abc(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() < 2) throw UsageError("usage: abc hits|count ...");
  const std::string& sub = a.pos[1];
  const uint64_t c_max = get_u64(a, "limit");
  if (c_max < 2) throw UsageError("--limit must be >= 2");

  if (sub == "hits") {
    const abc::RationalThreshold q =
        get_rational(a, "quality", abc::make_rational(1, 1));
    const std::string signature = "abc hits limit=" + std::to_string(c_max) +
                                  " quality=" + std::to_string(q.num) + "/" +
                                  std::to_string(q.den) +
                                  " chunk=1024 fmt=" + format_tag(o.format);
    ResumeState rs = init_resume(o, signature, 2);
    const abc::RadicalTable table(c_max);

    std::vector<abc::AbcTriple> hits;
    const std::string sidecar = o.checkpoint.empty() ? "" : o.checkpoint + ".hits";
    if (rs.midway && !sidecar.empty()) {
      // Reload buffered hits; drop lines past the checkpointed count (they
      // belong to a partition that never reached its checkpoint write).
      std::ifstream in(sidecar);
      std::string line;
      while (hits.size() < rs.hits && std::getline(in, line)) {
        std::istringstream ls(line);
        uint64_t av = 0, bv = 0;
        ls >> av >> bv;
        const uint64_t cv = av + bv;
        abc::AbcTriple t;
        t.a = static_cast<unsigned long>(av);
        t.b = static_cast<unsigned long>(bv);
        t.c = static_cast<unsigned long>(cv);
        t.rad_abc = mpz_class(static_cast<unsigned long>(table[av])) *
                    mpz_class(static_cast<unsigned long>(table[bv])) *
                    mpz_class(static_cast<unsigned long>(table[cv]));
        t.quality = abc::quality_of(t.c, t.rad_abc);
        hits.push_back(std::move(t));
      }
      if (hits.size() != rs.hits)
        throw UsageError("checkpoint sidecar " + sidecar + " is truncated");
    } else if (!sidecar.empty()) {
      std::ofstream trunc(sidecar, std::ios::trunc);  // fresh run
    }

    Partitioned<abc::AbcTriple> p;
    p.lo = 2;
    p.hi = c_max;
    p.chunk = 1024;
    p.defer_final_checkpoint = true;
    p.produce = [&](uint64_t lo, uint64_t hi) {
      return abc::hits_in_range(table, lo, hi, q);
    };
    p.consume = [&](std::vector<abc::AbcTriple>&& batch) {
      const uint64_t n = batch.size();
      if (!sidecar.empty() && n > 0) {
        std::ofstream sc(sidecar, std::ios::app);
        for (const auto& t : batch) sc << t.a.get_str() << ' ' << t.b.get_str() << '\n';
        sc.flush();
      }
      for (auto& t : batch) hits.push_back(std::move(t));
      return n;
    };
    const bool completed = run_partitions(p, o, signature, rs);
    if (!completed) return 0;  // partial run prints nothing until finished

    abc::sort_by_quality(hits);
    Sink sink(out, o.format, {"a", "b", "c", "rad", "quality"}, want_color(o, out),
              false);
    for (const auto& t : hits) sink.emit(abc_record(t));
    sink.flush();
    if (!o.checkpoint.empty())
      save_checkpoint(o.checkpoint,
                      Checkpoint{1, signature_hash(signature), c_max + 1, rs.hits});
    return 0;
  }

  if (sub == "count") {
    const abc::RationalThreshold eps =
        get_rational(a, "epsilon", abc::make_rational(0, 1));
    const std::string signature = "abc count limit=" + std::to_string(c_max) +
                                  " epsilon=" + std::to_string(eps.num) + "/" +
                                  std::to_string(eps.den) +
                                  " chunk=1024 fmt=" + format_tag(o.format);
    ResumeState rs = init_resume(o, signature, 2);
    const abc::RadicalTable table(c_max);
    Partitioned<uint64_t> p;
    p.lo = 2;
    p.hi = c_max;
    p.chunk = 1024;
    p.produce = [&](uint64_t lo, uint64_t hi) {
      return std::vector<uint64_t>{abc::violations_in_range(table, lo, hi, eps)};
    };
    p.consume = [&](std::vector<uint64_t>&& v) { return v.at(0); };
    const bool completed = run_partitions(p, o, signature, rs);
    if (completed) out << rs.hits << '\n';
    return 0;
  }
  throw UsageError("unknown abc subcommand '" + sub + "'");
}

// ---------------------------------------------------------------------------
// factorial subcommands + brocard alias

Record near_record(const seq::NeighborhoodHit& h) {
  Record r;
  r.kind = "factorial_near";
  r.add("n", h.n).add("r", static_cast<uint64_t>(h.r)).add("offset", h.offset);
  r.add("x", h.x).add("status", verdict_status(h.verdict));
  if (h.verdict.status == powerful::Status::Undecided)
    r.add("cofactor", h.verdict.residual_cofactor);
  return r;
}

Record brocard_record(const seq::BrocardHit& h) {
  Record r;
  r.kind = "brocard";
  r.add("n", h.n).add("m", h.m);
  return r;
}

int run_brocard(const Args& a, const CommonOpts& o, std::ostream& out) {
  const uint64_t n_max = get_u64(a, "n-max");
  if (n_max < 1) throw UsageError("--n-max must be >= 1");
  const int64_t k = get_i64(a, "k", int64_t{1});
  const std::string signature = "brocard n-max=" + std::to_string(n_max) +
                                " k=" + std::to_string(k) +
                                " chunk=32 fmt=" + format_tag(o.format);
  ResumeState rs = init_resume(o, signature, 1);
  Sink sink(out, o.format, {"n", "m"}, want_color(o, out), rs.midway);
  const mpz_class kz(static_cast<long>(k));
  Partitioned<seq::BrocardHit> p;
  p.lo = 1;
  p.hi = n_max;
  p.chunk = 32;
  p.produce = [kz](uint64_t lo, uint64_t hi) { return seq::brocard_range(lo, hi, kz); };
  p.consume = [&](std::vector<seq::BrocardHit>&& hs) {
    for (const auto& h : hs) sink.emit(brocard_record(h));
    sink.flush();
    return hs.size();
  };
  run_partitions(p, o, signature, rs);
  return finish_exit(o, sink.undecided());
}

int cmd_factorial(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() < 2) throw UsageError("usage: factorial scan|near|brocard ...");
  const std::string& sub = a.pos[1];
  if (sub == "brocard") return run_brocard(a, o, out);
  if (sub == "scan") {
    const uint64_t n_max = get_u64(a, "limit");
    if (n_max < 1) throw UsageError("--limit must be >= 1");
    const std::string signature = "factorial scan limit=" + std::to_string(n_max) +
                                  " chunk=8192 fmt=" + format_tag(o.format);
    ResumeState rs = init_resume(o, signature, 1);
    Sink sink(out, o.format, {"n"}, want_color(o, out), rs.midway);
    Partitioned<uint64_t> p;
    p.lo = 1;
    p.hi = n_max;
    p.chunk = 8192;
    p.produce = [](uint64_t lo, uint64_t hi) {
      return seq::factorial_powerful_scan_range(lo, hi);
    };
    p.consume = [&](std::vector<uint64_t>&& ns) {
      for (uint64_t n : ns) {
        Record r;
        r.kind = "powerful";
        r.add("n", n);
        sink.emit(r);
      }
      sink.flush();
      return ns.size();
    };
    run_partitions(p, o, signature, rs);
    return finish_exit(o, sink.undecided());
  }
  if (sub == "near") {
    const uint64_t n_max = get_u64(a, "n-max");
    if (n_max < 1) throw UsageError("--n-max must be >= 1");
    const uint64_t k = get_u64(a, "k", uint64_t{0});
    const uint64_t r_exp = get_u64(a, "r", uint64_t{1});
    if (r_exp < 1) throw UsageError("--r must be >= 1");
    const std::string signature =
        "factorial near n-max=" + std::to_string(n_max) + " k=" + std::to_string(k) +
        " r=" + std::to_string(r_exp) + " chunk=8 fmt=" + format_tag(o.format) +
        " effort=" + effort_tag(o.effort);
    ResumeState rs = init_resume(o, signature, 1);
    Sink sink(out, o.format, {"n", "r", "offset", "x", "status", "cofactor"},
              want_color(o, out), rs.midway);
    Partitioned<seq::NeighborhoodHit> p;
    p.lo = 1;
    p.hi = n_max;
    p.chunk = 8;
    p.produce = [&, k, r_exp](uint64_t lo, uint64_t hi) {
      return seq::factorial_neighborhood_range(lo, hi, k, r_exp, o.effort);
    };
    p.consume = [&](std::vector<seq::NeighborhoodHit>&& hs) {
      for (const auto& h : hs) sink.emit(near_record(h));
      sink.flush();
      return hs.size();
    };
    run_partitions(p, o, signature, rs);
    return finish_exit(o, sink.undecided());
  }
  throw UsageError("unknown factorial subcommand '" + sub + "'");
}

// ---------------------------------------------------------------------------

int cmd_pow2(const Args& a, const CommonOpts& o, std::ostream& out) {
  const uint64_t n_max = get_u64(a, "n-max");
  if (n_max < 1) throw UsageError("--n-max must be >= 1");
  const std::string signature = "pow2 n-max=" + std::to_string(n_max) +
                                " chunk=8 fmt=" + format_tag(o.format) +
                                " effort=" + effort_tag(o.effort);
  ResumeState rs = init_resume(o, signature, 1);
  Sink sink(out, o.format, {"n", "x", "status", "cofactor"}, want_color(o, out),
            rs.midway);
  Partitioned<seq::Pow2Hit> p;
  p.lo = 1;
  p.hi = n_max;
  p.chunk = 8;
  p.produce = [&](uint64_t lo, uint64_t hi) {
    return seq::pow2_plus_one_range(lo, hi, o.effort);
  };
  p.consume = [&](std::vector<seq::Pow2Hit>&& hs) {
    for (const auto& h : hs) {
      Record r;
      r.kind = "pow2";
      r.add("n", h.n).add("x", h.x).add("status", verdict_status(h.verdict));
      if (h.verdict.status == powerful::Status::Undecided)
        r.add("cofactor", h.verdict.residual_cofactor);
      sink.emit(r);
    }
    sink.flush();
    return hs.size();
  };
  run_partitions(p, o, signature, rs);
  return finish_exit(o, sink.undecided());
}

// ---------------------------------------------------------------------------

int cmd_ap(const Args& a, const CommonOpts& o, std::ostream& out) {
  if (a.pos.size() < 2) throw UsageError("usage: ap runs|check ...");
  const std::string& sub = a.pos[1];
  if (sub == "runs") {
    ap::ApConfig cfg{get_u64(a, "a"), get_u64(a, "d")};
    ap::validate(cfg);
    const uint64_t limit = get_u64(a, "limit");
    const uint64_t run_len = get_u64(a, "run-len", uint64_t{2});
    if (run_len < 1 || run_len > 3) throw UsageError("--run-len must be 1, 2 or 3");
    if (limit < cfg.a) throw UsageError("--limit must be >= the first term a");
    const uint64_t reach = limit + (run_len - 1) * cfg.d;
    if (reach < limit) throw UsageError("--limit + run * d overflows");
    const std::string signature =
        "ap runs a=" + std::to_string(cfg.a) + " d=" + std::to_string(cfg.d) +
        " limit=" + std::to_string(limit) + " run-len=" + std::to_string(run_len) +
        " chunk=65536 fmt=" + format_tag(o.format);
    ResumeState rs = init_resume(o, signature, cfg.a);
    std::vector<std::string> cols;
    std::string kind;
    if (run_len == 1) {
      cols = {"x"};
      kind = "powerful";
    } else if (run_len == 2) {
      cols = {"x", "y"};
      kind = "pair";
    } else {
      cols = {"x", "y", "z"};
      kind = "triple";
    }
    Sink sink(out, o.format, cols, want_color(o, out), rs.midway);
    const std::vector<uint64_t> pool = powerful::enumerate_powerful(reach);
    Partitioned<uint64_t> p;
    p.lo = cfg.a;
    p.hi = limit;
    p.chunk = 65536;
    p.produce = [&, run_len](uint64_t lo, uint64_t hi) {
      return ap::runs_among(pool, cfg, lo, hi, static_cast<unsigned>(run_len));
    };
    p.consume = [&](std::vector<uint64_t>&& vs) {
      for (uint64_t v : vs) {
        Record r;
        r.kind = kind;
        r.add("x", v);
        if (run_len >= 2) r.add("y", v + cfg.d);
        if (run_len == 3) r.add("z", v + 2 * cfg.d);
        sink.emit(r);
      }
      sink.flush();
      return vs.size();
    };
    run_partitions(p, o, signature, rs);
    return finish_exit(o, sink.undecided());
  }
  if (sub == "check") {
    const mpz_class ak = get_mpz(a, "ak");
    const mpz_class ak1 = get_mpz(a, "ak1");
    const mpz_class ak2 = get_mpz(a, "ak2");
    const mpz_class d = get_mpz(a, "d");
    const ap::InequalityReport rep = ap::theorem_chain_check(ak, ak1, ak2, d, o.effort);
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    if (o.format == Format::Json) {
      nlohmann::ordered_json j;
      j["kind"] = "ap_check";
      j["identity_ok"] = rep.identity_ok;
      j["premise_ok"] = rep.premise_ok;
      j["powerful_ok"] = rep.powerful_ok;
      j["lhs"] = rep.lhs.get_str();
      j["rhs"] = rep.rhs.get_str();
      j["chain_ok"] = rep.chain_ok;
      out << j.dump() << '\n';
    } else if (o.format == Format::Records) {
      Record r;
      r.kind = "ap_check";
      r.add("identity", b(rep.identity_ok)).add("premise", b(rep.premise_ok));
      r.add("powerful", b(rep.powerful_ok));
      r.add("lhs", rep.lhs).add("rhs", rep.rhs).add("chain", b(rep.chain_ok));
      out << to_kv_line(r) << '\n';
    } else {
      out << "identity a_k*a_k+2 = a_k+1^2 - d^2 : " << b(rep.identity_ok) << '\n'
          << "premise  a_k > rad(d)^5           : " << b(rep.premise_ok) << '\n'
          << "powerful a_k, a_k+1, a_k+2        : " << b(rep.powerful_ok) << '\n'
          << "chain    rad(abc)^7 < c^6         : " << b(rep.chain_ok) << "  ("
          << rep.lhs << (rep.chain_ok ? " < " : " >= ") << rep.rhs << ")\n";
    }
    return 0;
  }
  throw UsageError("unknown ap subcommand '" + sub + "'");
}

// ---------------------------------------------------------------------------

int cmd_sums(const Args& a, const CommonOpts& o, std::ostream& out) {
  const uint64_t z_max = get_u64(a, "limit");
  if (z_max < 2) throw UsageError("--limit must be >= 2");
  const uint64_t k = get_u64(a, "k", uint64_t{2});
  if (k < 2) throw UsageError("--k must be >= 2");
  const std::string signature = "sums limit=" + std::to_string(z_max) +
                                " k=" + std::to_string(k) +
                                " chunk=4096 fmt=" + format_tag(o.format);
  ResumeState rs = init_resume(o, signature, 2);
  Sink sink(out, o.format, {"x", "y", "z", "k"}, want_color(o, out), rs.midway);
  const std::vector<uint64_t> pool = k == 2 ? powerful::enumerate_powerful(z_max)
                                            : powerful::enumerate_k_powerful(z_max, k);
  Partitioned<additive::PowerfulSumTriple> p;
  p.lo = 2;
  p.hi = z_max;
  p.chunk = 4096;
  p.produce = [&, k](uint64_t lo, uint64_t hi) {
    return additive::sums_in_z_range(pool, lo, hi, k);
  };
  p.consume = [&](std::vector<additive::PowerfulSumTriple>&& ts) {
    for (const auto& t : ts) {
      Record r;
      r.kind = "sum_triple";
      r.add("x", t.x).add("y", t.y).add("z", t.z).add("k", static_cast<uint64_t>(t.k));
      sink.emit(r);
    }
    sink.flush();
    return ts.size();
  };
  run_partitions(p, o, signature, rs);
  return finish_exit(o, sink.undecided());
}

int cmd_powersum(const Args& a, const CommonOpts& o, std::ostream& out) {
  const uint64_t n = get_u64(a, "n");
  if (n < 2) throw UsageError("--n must be >= 2");
  const uint64_t base_max = get_u64(a, "base-max");
  if (base_max < 1) throw UsageError("--base-max must be >= 1");
  const std::string signature = "powersum n=" + std::to_string(n) +
                                " base-max=" + std::to_string(base_max) +
                                " chunk=16 fmt=" + format_tag(o.format) +
                                " effort=" + effort_tag(o.effort);
  ResumeState rs = init_resume(o, signature, 1);
  Sink sink(out, o.format, {"n", "x", "y", "z", "status", "cofactor"},
            want_color(o, out), rs.midway);
  Partitioned<additive::PowerSumHit> p;
  p.lo = 1;
  p.hi = base_max;
  p.chunk = 16;
  p.produce = [&, n, base_max](uint64_t lo, uint64_t hi) {
    return additive::power_sum_range(n, lo, hi, base_max, o.effort);
  };
  p.consume = [&](std::vector<additive::PowerSumHit>&& hs) {
    for (const auto& h : hs) {
      Record r;
      r.kind = "power_sum";
      r.add("n", n).add("x", h.x).add("y", h.y).add("z", h.value);
      r.add("status", verdict_status(h.verdict));
      if (h.verdict.status == powerful::Status::Undecided)
        r.add("cofactor", h.verdict.residual_cofactor);
      sink.emit(r);
    }
    sink.flush();
    return hs.size();
  };
  run_partitions(p, o, signature, rs);
  return finish_exit(o, sink.undecided());
}

// ---------------------------------------------------------------------------

void print_usage(std::ostream& os) {
  os << "pownum - desk-scale searches around powerful numbers and abc triples\n"
        "\n"
        "usage: pownum <command> [flags]\n"
        "\n"
        "commands:\n"
        "  factor N                         factor with the effort budget\n"
        "  rad N                            radical (product of distinct primes)\n"
        "  primorial X                      product of primes <= X\n"
        "  powerful list --limit L          powerful numbers <= L\n"
        "  powerful count --limit L         how many powerful numbers <= L\n"
        "  powerful verdict X               certified powerful/not/undecided\n"
        "  powerful dominated X             is rad(X)^2 <= X\n"
        "  abc hits --limit C [--quality P/Q]    triples with quality > P/Q\n"
        "  abc count --limit C --epsilon P/Q     rad(abc)^(1+eps) < c violations\n"
        "  factorial scan --limit N         n <= N with n! powerful\n"
        "  factorial near --n-max N --k K [--r R]   powerful x, |x-(n!)^r| <= K\n"
        "  brocard --n-max N [--k K]        n! + k = m^2 solutions\n"
        "  pow2 --n-max N                   n with 2^n + 1 powerful\n"
        "  ap runs --a A --d D --limit L [--run-len 1|2|3]\n"
        "                                   powerful runs in the progression\n"
        "  ap check --ak X --ak1 Y --ak2 Z --d D    exact epsilon=1/6 chain report\n"
        "  sums --limit Z [--k K]           coprime k-powerful x + y = z\n"
        "  powersum --n N --base-max B      coprime x,y with x^n + y^n powerful\n"
        "\n"
        "shared flags:\n"
        "  --records | --json               line records instead of a table\n"
        "  --seed N --trial-bound N --rho-budget N   effort budget (deterministic)\n"
        "  --checkpoint PATH [--resume]     resumable range searches\n"
        "  --stop-after P                   stop after P partitions (with checkpoint)\n"
        "  --threads N                      parallel partitions, same output\n"
        "  --strict                         exit 3 when any result is undecided\n"
        "thresholds (--quality, --epsilon) are exact rationals like 1/6; floats are\n"
        "rejected.\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  if (args.empty()) {
    print_usage(err);
    return 2;
  }
  const std::string& cmd = args[0];
  if (cmd == "help" || cmd == "--help" || cmd == "-h") {
    print_usage(out);
    return 0;
  }
  Args a = parse_tokens(args, 0);
  if (a.flags.count("help")) {
    print_usage(out);
    return 0;
  }
  const CommonOpts o = common_opts(a);

  if (cmd == "factor") {
    check_flags(a, kValueFlags);
    return cmd_factor(a, o, out);
  }
  if (cmd == "rad") {
    check_flags(a, kValueFlags);
    return cmd_rad(a, o, out);
  }
  if (cmd == "primorial") {
    check_flags(a, kValueFlags);
    return cmd_primorial(a, o, out);
  }
  if (cmd == "powerful") {
    check_flags(a, with(kSearchFlags, {"limit"}));
    return cmd_powerful(a, o, out);
  }
  if (cmd == "abc") {
    check_flags(a, with(kSearchFlags, {"limit", "quality", "epsilon"}));
    return cmd_abc(a, o, out);
  }
  if (cmd == "factorial") {
    check_flags(a, with(kSearchFlags, {"limit", "n-max", "k", "r"}));
    return cmd_factorial(a, o, out);
  }
  if (cmd == "brocard") {
    check_flags(a, with(kSearchFlags, {"n-max", "k"}));
    return run_brocard(a, o, out);
  }
  if (cmd == "pow2") {
    check_flags(a, with(kSearchFlags, {"n-max"}));
    return cmd_pow2(a, o, out);
  }
  if (cmd == "ap") {
    check_flags(a, with(kSearchFlags, {"a", "d", "limit", "run-len", "ak", "ak1",
                                       "ak2"}));
    return cmd_ap(a, o, out);
  }
  if (cmd == "sums") {
    check_flags(a, with(kSearchFlags, {"limit", "k"}));
    return cmd_sums(a, o, out);
  }
  if (cmd == "powersum") {
    check_flags(a, with(kSearchFlags, {"n", "base-max"}));
    return cmd_powersum(a, o, out);
  }
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n(run 'pownum help' for usage)\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UndecidedError& e) {
    err << "undecided: " << e.what() << " (cofactor " << e.cofactor() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pownum::cli
