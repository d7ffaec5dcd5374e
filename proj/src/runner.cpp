#include "diracwb/runner.hpp"

#include "diracwb/pairs.hpp"
#include "diracwb/proto.hpp"
#include "diracwb/relations.hpp"

#include <chrono>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diracwb {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string get_param(const Params& params, const std::string& key,
                      const std::string& fallback = "") {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  return fallback;
}

AlgebroidStructure algebroid_of(const DefinitionFile& f, const Params& params) {
  const StructureBlock& mu = f.resolve_mu(get_param(params, "mu"));
  AlgebroidStructure alg;
  alg.base_dim = f.base_dim;
  alg.fiber_rank = f.fiber_rank;
  alg.mu = mu.value;
  return alg;
}

ProtoStructure proto_of(const DefinitionFile& f, const Params& params) {
  ProtoStructure th;
  th.base_dim = f.base_dim;
  th.fiber_rank = f.fiber_rank;
  th.mu = f.resolve_mu(get_param(params, "mu")).value;
  std::string g = get_param(params, "gamma"), p = get_param(params, "phi"),
              s = get_param(params, "psi");
  if (!g.empty()) th.gamma = f.require(g, BlockKind::Gamma).value;
  if (!p.empty()) th.phi = f.require(p, BlockKind::Phi).value;
  if (!s.empty()) th.psi = f.require(s, BlockKind::Psi).value;
  return th;
}

// A named tensor that may serve as a Dirac-structure graph: bivectors give
// {(pi xi, xi)}, 2-forms give {(x, omega x)}, doublebundles are taken as is.
DoubleSubbundle dirac_candidate(const DefinitionFile& f, const std::string& name, int r) {
  const StructureBlock* b = f.find(name);
  if (!b) throw UsageError("no structure named '" + name + "'");
  switch (b->kind) {
    case BlockKind::Bivector: return DoubleSubbundle::graph_of_bivector(b->value, r);
    case BlockKind::TwoForm: return DoubleSubbundle::graph_of_twoform(b->value, r);
    case BlockKind::DoubleBundle: return DoubleSubbundle::from_generators(r, b->matrix);
    default:
      throw UsageError("structure '" + name + "' (" + to_string(b->kind) +
                       ") cannot define a Dirac structure");
  }
}

std::string require_param(const Params& params, const std::string& key) {
  std::string v = get_param(params, key);
  if (v.empty()) throw UsageError("missing parameter '" + key + "'");
  return v;
}

CheckReport dispatch(const DefinitionFile& f, const std::string& command, const Params& params,
                     const RunFlags& flags) {
  PairOptions opt;
  opt.nij.samples = flags.samples;
  opt.nij.max_degree = flags.max_degree;
  opt.nij.seed = flags.seed;
  opt.closure.samples = flags.samples;
  opt.closure.max_degree = flags.max_degree;
  opt.closure.seed = flags.seed;

  if (command == "lie-algebroid") return check_lie_algebroid(algebroid_of(f, params));

  if (command == "proto") return check_proto(proto_of(f, params));

  if (command == "poisson") {
    const auto& pi = f.require(require_param(params, "bivector"), BlockKind::Bivector);
    return is_poisson(algebroid_of(f, params), pi.value);
  }

  if (command == "hamiltonian-pair" || command == "poisson-pair" ||
      command == "torsion-identity" || command == "k-annihilator" ||
      command == "nijenhuis-from-pair") {
    const auto& a = f.require(require_param(params, "first"), BlockKind::Bivector);
    const auto& b = f.require(require_param(params, "second"), BlockKind::Bivector);
    AlgebroidStructure alg = algebroid_of(f, params);
    if (command == "hamiltonian-pair") return is_hamiltonian_pair(alg, a.value, b.value);
    if (command == "poisson-pair") return is_poisson_pair(alg, a.value, b.value, opt);
    if (command == "torsion-identity") return torsion_identity_check(alg, a.value, b.value);
    if (command == "k-annihilator") return values_annihilate_k(alg, a.value, b.value);
    NijenhuisFromPair nf = nijenhuis_from_pair(alg, a.value, b.value);
    nf.report.note("N = " + nf.n.render(&f.names));
    return nf.report;
  }

  if (command == "dirac-pair") {
    ProtoStructure th = proto_of(f, params);
    DoubleSubbundle l = dirac_candidate(f, require_param(params, "first"), f.fiber_rank);
    DoubleSubbundle lp = dirac_candidate(f, require_param(params, "second"), f.fiber_rank);
    return dirac_pair_check(th, l, lp, opt);
  }

  if (command == "presymplectic-pair" || command == "symplectic-pair") {
    const auto& a = f.require(require_param(params, "first"), BlockKind::TwoForm);
    const auto& b = f.require(require_param(params, "second"), BlockKind::TwoForm);
    AlgebroidStructure alg = algebroid_of(f, params);
    return command == "symplectic-pair" ? symplectic_pair_check(alg, a.value, b.value, opt)
                                        : presymplectic_pair_check(alg, a.value, b.value, opt);
  }

  if (command == "pomega") {
    const auto& pi = f.require(require_param(params, "bivector"), BlockKind::Bivector);
    const auto& om = f.require(require_param(params, "twoform"), BlockKind::TwoForm);
    return pomega_check(algebroid_of(f, params), pi.value, om.value, opt);
  }

  if (command == "omegan" || command == "weak-omegan" || command == "nplus-star") {
    const auto& om = f.require(require_param(params, "twoform"), BlockKind::TwoForm);
    const auto& n = f.require(require_param(params, "endo"), BlockKind::Endo);
    AlgebroidStructure alg = algebroid_of(f, params);
    Endo e = Endo::from_poly(n.matrix);
    if (command == "omegan") return omegan_check(alg, om.value, e, opt);
    if (command == "weak-omegan") return weak_omegan_check(alg, om.value, e);
    return nplus_equals_nstar(alg, om.value, e);
  }

  if (command == "lenard") {
    const auto& om = f.require(require_param(params, "twoform"), BlockKind::TwoForm);
    const auto& n = f.require(require_param(params, "endo"), BlockKind::Endo);
    int pmax = std::stoi(get_param(params, "pmax", "5"));
    auto reports = lenard_chain(algebroid_of(f, params), om.value, Endo::from_poly(n.matrix),
                                pmax);
    CheckReport merged = make_report("lenard-chain");
    merged.param("pmax", std::to_string(pmax));
    for (const auto& r : reports) merged.absorb(r);
    return merged;
  }

  if (command == "torsion") {
    const auto& n = f.require(require_param(params, "endo"), BlockKind::Endo);
    TorsionTable tab = nijenhuis_torsion(algebroid_of(f, params), Endo::from_poly(n.matrix));
    CheckReport rep = make_report("torsion");
    if (tab.vanishes)
      rep.note("TN vanishes on all frame pairs (zero-torsion witness)");
    else
      rep.fail(tab.witness);
    return rep;
  }

  if (command == "nijenhuis-relation") {
    const auto& n = f.require(require_param(params, "endo"), BlockKind::Endo);
    AlgebroidStructure alg = algebroid_of(f, params);
    return is_nijenhuis_relation(alg, LinearRelation::graph_of(n.matrix), opt.nij);
  }

  if (command == "dirac") {
    ProtoStructure th = proto_of(f, params);
    DoubleSubbundle l = dirac_candidate(f, require_param(params, "subbundle"), f.fiber_rank);
    return is_dirac(th, l, opt.closure);
  }

  if (command == "poisson-function") {
    const auto& pi = f.require(require_param(params, "bivector"), BlockKind::Bivector);
    return is_poisson_function(proto_of(f, params), pi.value, opt.closure);
  }
  if (command == "presymplectic-function") {
    const auto& om = f.require(require_param(params, "twoform"), BlockKind::TwoForm);
    return is_presymplectic_function(proto_of(f, params), om.value, opt.closure);
  }
  if (command == "poisson-function-mod") {
    const auto& pi = f.require(require_param(params, "bivector"), BlockKind::Bivector);
    const auto& d = f.require(require_param(params, "subbundle"), BlockKind::Subbundle);
    return poisson_function_mod(proto_of(f, params), pi.value, d.matrix);
  }
  if (command == "presymplectic-function-mod") {
    const auto& om = f.require(require_param(params, "twoform"), BlockKind::TwoForm);
    const auto& ff = f.require(require_param(params, "cosubbundle"), BlockKind::Cosubbundle);
    return presymplectic_function_mod(proto_of(f, params), om.value, ff.matrix);
  }
  if (command == "characteristic-pair") {
    const auto& pi = f.require(require_param(params, "bivector"), BlockKind::Bivector);
    const auto& d = f.require(require_param(params, "subbundle"), BlockKind::Subbundle);
    return characteristic_pair_dirac(proto_of(f, params), {false, pi.value, d.matrix},
                                     opt.closure);
  }
  if (command == "characteristic-pair-dual") {
    const auto& om = f.require(require_param(params, "twoform"), BlockKind::TwoForm);
    const auto& ff = f.require(require_param(params, "cosubbundle"), BlockKind::Cosubbundle);
    return characteristic_pair_dirac(proto_of(f, params), {true, om.value, ff.matrix},
                                     opt.closure);
  }

  if (command == "monge-ampere") return monge_ampere_suite(opt);

  throw UsageError("unknown check '" + command + "'");
}

}  // namespace

std::vector<std::string> verifier_catalog() {
  return {"lie-algebroid",      "proto",
          "poisson",            "hamiltonian-pair",
          "poisson-pair",       "torsion-identity",
          "k-annihilator",      "nijenhuis-from-pair",
          "dirac-pair",         "presymplectic-pair",
          "symplectic-pair",    "pomega",
          "omegan",             "weak-omegan",
          "nplus-star",         "lenard",
          "torsion",            "nijenhuis-relation",
          "dirac",              "poisson-function",
          "presymplectic-function", "poisson-function-mod",
          "presymplectic-function-mod", "characteristic-pair",
          "characteristic-pair-dual", "monge-ampere"};
}

CheckReport run_check(const DefinitionFile& file, const std::string& command,
                      const Params& params, const RunFlags& flags) {
  auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  try {
    rep = dispatch(file, command, params, flags);
  } catch (const PreconditionError& e) {
    throw UsageError(command + ": " + e.what());
  } catch (const BidegreeError& e) {
    throw UsageError(command + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(command + ": " + e.what());
  }
  // prepend the invocation parameters for the report line
  Params tagged;
  for (const auto& [k, v] : params) tagged.emplace_back(k, v);
  tagged.insert(tagged.end(), rep.params.begin(), rep.params.end());
  rep.params = std::move(tagged);
  rep.check = command;
  if (flags.timings) {
    auto t1 = std::chrono::steady_clock::now();
    rep.timing_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return rep;
}

int run_file(const DefinitionFile& file, const RunFlags& flags, std::ostream& out) {
  const int n = static_cast<int>(file.checks.size());
  std::vector<CheckReport> reports(n);
  std::vector<std::string> errors(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      reports[i] = run_check(file, file.checks[i].command, file.checks[i].params, flags);
    } catch (const UsageError& e) {
      errors[i] = e.what();
    }
  }
  bool any_fail = false, any_error = false;
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      any_error = true;
      out << "{\"check\": \"" << file.checks[i].command << "\", \"error\": \"" << errors[i]
          << "\"}\n";
      continue;
    }
    out << (flags.pretty ? reports[i].pretty_line() : reports[i].json_line()) << "\n";
    if (!reports[i].passed()) any_fail = true;
  }
  if (any_error) return 2;
  return any_fail ? 1 : 0;
}

}  // namespace diracwb
