#include "scarlab/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "scarlab/combinatorics.hpp"
#include "scarlab/dynamics.hpp"
#include "scarlab/ed_oracle.hpp"
#include "scarlab/entanglement.hpp"
#include "scarlab/error.hpp"
#include "scarlab/quasimodes.hpp"
#include "scarlab/symspace.hpp"
#include "scarlab/tdvp_frame.hpp"

#ifndef SCARLAB_VERSION
#define SCARLAB_VERSION "0.0.0"
#endif

extern "C" void openblas_set_num_threads(int);

namespace scarlab::cli {

void render_svg(const CsvTable& table, const std::string& kind, const std::string& x, const std::string& y,
                const std::string& z, const std::string& out);

using json = nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, std::size_t(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char h[3];
    std::snprintf(h, sizeof h, "%02x", md[i]);
    hex += h;
  }
  return hex;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ValidationError("CSV has no column '" + name + "'");
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw ValidationError(path + " is empty");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line, ',');
    if (row.size() != t.header.size())
      throw ValidationError(path + ": row " + std::to_string(t.rows.size() + 1) + " has " + std::to_string(row.size()) +
                            " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ValidationError("cannot write " + path);
    row(header);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(long v) { return std::to_string(v); }

// Everything a subcommand produced, for the manifest.
struct Outputs {
  std::vector<std::string> files;
  json notes = json::object();
};

void require_even(int N) {
  require(N >= 2 && N % 2 == 0, "N must be even and at least 2, got " + std::to_string(N));
}

std::vector<int> parse_n_list(const std::string& text) {
  const auto parts = split(text, ':');
  std::vector<int> out;
  try {
    if (parts.size() == 3) {
      const int a = std::stoi(parts[0]), b = std::stoi(parts[1]), s = std::stoi(parts[2]);
      require(s > 0 && a <= b, "N-list a:b:step needs a <= b and step > 0");
      for (int n = a; n <= b; n += s) out.push_back(n);
    } else {
      for (const auto& p : split(text, ',')) out.push_back(std::stoi(p));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError("cannot parse N-list '" + text + "'");
  }
  require(!out.empty(), "empty N-list");
  for (int n : out) require_even(n);
  return out;
}

std::string sidecar_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  p.replace_extension(suffix);
  return p.string();
}

// --- subcommands ---------------------------------------------------------

struct Common {
  int N = 0;
  std::string out;
  double tmax = 10.0, dt = 0.01;
  std::size_t dense_limit = 5000;
};

void cmd_classes(const Common& c, const std::string& boundary, Outputs& o) {
  require(c.N >= 2, "N must be at least 2");
  const Boundary b = parse_boundary(boundary);
  const ClassTable t = ClassTable::build(c.N, b);
  CsvWriter w(c.out, {"n1", "n2", "count", "log_count"});
  for (int n1 = 0; n1 <= t.half(); ++n1)
    for (int n2 = 0; n2 <= t.half(); ++n2) {
      const Count& k = t.at(n1, n2);
      if (k.zero) continue;
      w.row({fmt(long(n1)), fmt(long(n2)), k.exact ? to_string(*k.exact) : fmt(k.value()), fmt(k.log)});
    }
  o.files.push_back(c.out);
}

void cmd_hamiltonian(const Common& c, Outputs& o) {
  require_even(c.N);
  auto basis = SymBasis::build(c.N);
  const SymOperator H = build_hamiltonian(basis);
  {
    CsvWriter w(c.out, {"i", "j", "value"});
    const SparseMatrix& m = H.sparse();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) w.row({fmt(long(it.row())), fmt(long(it.col())), fmt(it.value())});
  }
  const std::string side = sidecar_path(c.out, ".labels.json");
  json labels = json::array();
  for (std::size_t i = 0; i < basis->size(); ++i) labels.push_back({{"index", i}, {"n1", basis->label(i).n1}, {"n2", basis->label(i).n2}});
  std::ofstream(side) << json{{"N", c.N}, {"dimension", basis->size()}, {"labels", labels}}.dump(2) << '\n';
  o.files.push_back(c.out);
  o.files.push_back(side);
}

void cmd_quasimodes(const Common& c, Outputs& o) {
  require_even(c.N);
  DiagonalizeOptions opts;
  opts.dense_limit = c.dense_limit;
  const QuasimodeSet qs = quasimodes(c.N, opts);
  CsvWriter w(c.out, {"E", "overlap", "parity", "band", "variance"});
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const auto i = Eigen::Index(k);
    w.row({fmt(qs.energies[i]), fmt(qs.neel_overlap[i]), to_string(qs.parity[k]), to_string(qs.band[k]),
           std::isnan(qs.variance[i]) ? "nan" : fmt(qs.variance[i])});
  }
  for (const auto& f : qs.flags) std::cerr << "note: " << f << '\n';
  if (!qs.flags.empty()) o.notes["flags"] = qs.flags;
  o.files.push_back(c.out);
}

int default_cut(int N) { return N % 4 == 0 ? N / 2 : N / 2 - 1; }

Trajectory neel_trajectory(int N, const std::vector<double>& times, std::size_t dense_limit) {
  auto basis = SymBasis::build(N);
  const SymOperator H = build_hamiltonian(basis);
  const SymVector psi0 = SymVector::basis_state(basis, basis->neel());
  Trajectory tr;
  tr.t = times;
  if (basis->size() <= dense_limit) {
    const QuasimodeSet qs = diagonalize(H);
    for (double t : times) tr.states.push_back(evolve(psi0, t, qs));
    return tr;
  }
  SymVector cur = psi0;
  double now = 0.0;
  for (double t : times) {
    require(t >= now, "times must be non-decreasing for Krylov evolution");
    if (t > now) cur.coeffs = linalg::krylov_expm(H.sparse(), cur.coeffs, t - now);
    now = t;
    tr.states.push_back(cur);
  }
  return tr;
}

void cmd_dynamics(const Common& c, int cut, Outputs& o) {
  require_even(c.N);
  if (cut == 0) cut = default_cut(c.N);
  const Trajectory tr = neel_trajectory(c.N, time_grid(c.tmax, c.dt), c.dense_limit);
  const BasisPtr& basis = tr.states.front().basis;
  const std::size_t in = basis->index(basis->neel()), ia = basis->index(basis->anti_neel());
  const std::vector<double> dens = density_series(tr);
  CsvWriter w(c.out, {"t", "f_rev", "f_trans", "density", "entropy"});
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const auto& s = tr.states[k];
    w.row({fmt(tr.t[k]), fmt(std::norm(s.coeffs[Eigen::Index(in)])), fmt(std::norm(s.coeffs[Eigen::Index(ia)])),
           fmt(dens[k]), fmt(entropy(s, cut))});
  }
  o.notes["cut"] = cut;
  o.files.push_back(c.out);
}

SymVector read_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (!j.contains("N") || !j.contains("coefficients")) throw ValidationError(path + ": needs N and coefficients");
  const int N = j["N"].get<int>();
  require_even(N);
  auto basis = SymBasis::build(N);
  SymVector v = SymVector::zero(basis);
  for (const auto& e : j["coefficients"]) {
    const Label l{e.at("n1").get<int>(), e.at("n2").get<int>()};
    v.coeffs[Eigen::Index(basis->index(l))] = {e.value("re", 0.0), e.value("im", 0.0)};
  }
  require(v.norm2() > 0, path + ": state is zero");
  return v;
}

SymVector random_state(int N, unsigned seed) {
  auto basis = SymBasis::build(N);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SymVector v = SymVector::zero(basis);
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) v.coeffs[i] = {g(rng), g(rng)};
  v.coeffs.normalize();
  return v;
}

void cmd_entropy(const Common& c, const std::string& series, const std::string& state, bool random, unsigned seed,
                 int cut, Outputs& o) {
  const int modes = int(!series.empty()) + int(!state.empty()) + int(random);
  require(modes == 1, "give exactly one of --series, --state, --random");
  if (!series.empty()) {
    require_even(c.N);
    if (cut == 0) cut = default_cut(c.N);
    const CsvTable t = read_csv(series);
    const std::size_t tc = t.column("t");
    std::vector<double> times;
    for (const auto& r : t.rows) times.push_back(std::stod(r[tc]));
    const Trajectory tr = neel_trajectory(c.N, times, c.dense_limit);
    auto header = t.header;
    header.push_back("entropy_L" + std::to_string(cut));
    CsvWriter w(c.out, header);
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      auto row = t.rows[k];
      row.push_back(fmt(entropy(tr.states[k], cut)));
      w.row(row);
    }
  } else {
    if (random) require_even(c.N);
    const SymVector v = random ? random_state(c.N, seed) : read_state(state);
    const int N = v.basis->N();
    CsvWriter w(c.out, {"N_L", "entropy"});
    if (cut != 0) {
      w.row({fmt(long(cut)), fmt(entropy(v, cut))});
    } else {
      for (int l = 2; l <= N - 2; l += 2) w.row({fmt(long(l)), fmt(entropy(v, l))});
    }
    if (random) o.notes["seed"] = seed;
  }
  o.files.push_back(c.out);
}

std::uint64_t neel_bits(int N, int offset) {
  std::uint64_t s = 0;
  for (int j = offset; j < N; j += 2) s |= std::uint64_t(1) << j;
  return s;
}

void cmd_ed(const Common& c, bool spectrum, bool quench, int cap, const std::string& snapshot, Outputs& o) {
  require(c.N >= 2 && c.N % 2 == 0, "ed needs an even N, got " + std::to_string(c.N));
  require(spectrum != quench, "give exactly one of --spectrum and --quench");
  auto full = ed::enumerate_basis(c.N, cap);
  const std::size_t in = full->index(neel_bits(c.N, 0)), ia = full->index(neel_bits(c.N, 1));
  if (spectrum) {
    const linalg::EigenSystem es = ed::full_spectrum(*full);
    auto sym = SymBasis::build(c.N);
    const Eigen::MatrixXd P = Eigen::MatrixXd(ed::embedding_matrix(*full, *sym));
    const Eigen::MatrixXd inK = P.transpose() * es.vectors;
    CsvWriter w(c.out, {"E", "neel_overlap", "weight_in_K"});
    for (Eigen::Index k = 0; k < es.values.size(); ++k)
      w.row({fmt(es.values[k]), fmt(std::pow(es.vectors(Eigen::Index(in), k), 2)), fmt(inK.col(k).squaredNorm())});
  } else {
    const SparseMatrix H = ed::build_pxp(*full);
    ed::FullVector psi{full, Eigen::VectorXcd::Zero(Eigen::Index(full->size()))};
    psi.coeffs[Eigen::Index(in)] = 1.0;
    std::vector<double> occ(full->size());
    for (std::size_t i = 0; i < full->size(); ++i) occ[i] = double(__builtin_popcountll(full->state(i))) / c.N;
    const bool with_entropy = c.N <= ed::kEntropyCap;
    const int cut = default_cut(c.N);
    CsvWriter w(c.out, {"t", "f_rev", "f_trans", "density", "entropy"});
    auto observe = [&](double t, const ed::FullVector& v) {
      double d = 0;
      for (std::size_t i = 0; i < occ.size(); ++i) d += occ[i] * std::norm(v.coeffs[Eigen::Index(i)]);
      w.row({fmt(t), fmt(std::norm(v.coeffs[Eigen::Index(in)])), fmt(std::norm(v.coeffs[Eigen::Index(ia)])), fmt(d),
             with_entropy ? fmt(ed::reduced_entropy(v, cut)) : "nan"});
    };
    observe(0.0, psi);
    const ed::FullVector last = ed::evolve_krylov(H, psi, c.tmax, c.dt, observe);
    if (!snapshot.empty()) {
      ed::write_snapshot(snapshot, last);
      o.files.push_back(snapshot);
    }
    o.notes["entropy_cut"] = with_entropy ? json(cut) : json(nullptr);
  }
  o.files.push_back(c.out);
}

void cmd_frame(const Common& c, const std::string& map, int mode, int grid, double eps, Outputs& o) {
  require_even(c.N);
  auto basis = SymBasis::build(c.N);
  frame::FrameDiagonal fd = frame::frame_diagonal(basis, 0.0);
  fd.eps = eps >= 0 ? eps : frame::default_epsilon(fd);
  o.notes["epsilon"] = fd.eps;
  const auto ax = frame::section_axis(grid);
  CsvWriter w(c.out, {"theta1", "theta2", "value_re", "value_im"});
  if (map == "wavefn") {
    const QuasimodeSet qs = quasimodes(c.N);
    require(qs.has_vectors(), "wavefunctions need quasimode vectors; dim K is above the dense limit");
    require(mode >= 0 && std::size_t(mode) < qs.size(),
            "--mode must index a quasimode in 0.." + std::to_string(qs.size() - 1));
    const SymVector q{basis, qs.vectors.col(mode).cast<std::complex<double>>()};
    const Eigen::MatrixXcd psi = frame::wavefunction(q, fd, ax, ax);
    o.notes["mode"] = {{"index", mode}, {"E", qs.energies[mode]}, {"band", to_string(qs.band[std::size_t(mode)])}};
    for (std::size_t i = 0; i < ax.size(); ++i)
      for (std::size_t j = 0; j < ax.size(); ++j) {
        const auto z = psi(Eigen::Index(i), Eigen::Index(j));
        w.row({fmt(ax[i]), fmt(ax[j]), fmt(z.real()), fmt(z.imag())});
      }
  } else {
    std::function<double(const frame::CoherentPoint&)> f;
    if (map == "dfs")
      f = [&](const frame::CoherentPoint& p) { return frame::fubini_study(p, fd); };
    else if (map == "var")
      f = [&](const frame::CoherentPoint& p) { return frame::transform_variance(p, fd); };
    else if (map == "nu")
      f = [&](const frame::CoherentPoint& p) { return frame::nu_factor(p, fd) * frame::mu_density(c.N, p.theta1, p.theta2); };
    else
      throw ValidationError("unknown map '" + map + "'");
    for (double a : ax)
      for (double b : ax) w.row({fmt(a), fmt(b), fmt(f({a, 0.0, b, 0.0})), fmt(0.0)});
  }
  o.files.push_back(c.out);
}

void cmd_flow(const Common& c, int grid, const std::string& curve_out, const std::string& curve_mode, double th1,
              double th2, Outputs& o) {
  require_even(c.N);
  const frame::FlowField fo(c.N, frame::FlowMode::original), ft(c.N, frame::FlowMode::transformed);
  const auto ax = frame::section_axis(grid);
  {
    CsvWriter w(c.out, {"theta1", "theta2", "dtheta1", "dtheta2", "dtheta1_transformed", "dtheta2_transformed",
                        "cosine", "condition", "near_singular"});
    for (double a : ax)
      for (double b : ax) {
        const auto vo = fo.at(a, b), vt = ft.at(a, b);
        w.row({fmt(a), fmt(b), fmt(vo.dtheta1), fmt(vo.dtheta2), fmt(vt.dtheta1), fmt(vt.dtheta2),
               fmt(frame::cosine_similarity(vo, vt)), fmt(vt.condition), (vo.near_singular || vt.near_singular) ? "1" : "0"});
      }
  }
  o.files.push_back(c.out);
  require(curve_mode == "original" || curve_mode == "transformed", "curve mode is original or transformed");
  const frame::FlowField& f = curve_mode == "original" ? fo : ft;
  const frame::IntegralCurve ic = frame::integrate_flow(f, th1, th2, c.dt, c.tmax);
  CsvWriter w(curve_out, {"t", "theta1", "theta2"});
  for (std::size_t k = 0; k < ic.t.size(); ++k) w.row({fmt(ic.t[k]), fmt(ic.theta1[k]), fmt(ic.theta2[k])});
  const frame::Closure cl = frame::closure(ic);
  o.notes["closure"] = {{"period", cl.period}, {"distance", cl.distance}, {"returned", cl.returned}};
  o.files.push_back(curve_out);
}

void cmd_scaling(const Common& c, const std::string& quantity, const std::string& nlist, Outputs& o) {
  const std::vector<int> Ns = parse_n_list(nlist);
  if (quantity == "f1" || quantity == "f_half" || quantity == "fidelity") {
    CsvWriter w(c.out, {"N", "t1", "f1", "t_half", "f_half"});
    for (int N : Ns) {
      const ScarTimes st = scar_times(fidelity_series(N, c.tmax, c.dt, c.dense_limit));
      w.row({fmt(long(N)), fmt(st.revival.t), fmt(st.revival.value), fmt(st.transfer.t), fmt(st.transfer.value)});
      std::cerr << "N=" << N << " done\n";
    }
  } else if (quantity == "dfs") {
    CsvWriter w(c.out, {"N", "dfs"});
    for (int N : Ns) w.row({fmt(long(N)), fmt(frame::averaged_fubini_study(N))});
  } else if (quantity == "resolution") {
    CsvWriter w(c.out, {"N", "deviation"});
    for (int N : Ns) w.row({fmt(long(N)), fmt(frame::resolution_check(N))});
  } else {
    throw ValidationError("unknown quantity '" + quantity + "' (f1, dfs, resolution)");
  }
  o.files.push_back(c.out);
}

// --- manifest --------------------------------------------------------------

json collect_params(const CLI::App& sub) {
  json p = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--manifest") continue;
    p[name] = opt->get_items_expected_max() == 0 ? json::array() : json(opt->results());
  }
  return p;
}

void write_manifest(const std::string& path, const std::string& sub, const json& params, double wall,
                    const Outputs& o) {
  json files = json::array();
  for (const auto& f : o.files) files.push_back({{"path", f}, {"sha256", sha256_file(f)}});
  json m{{"tool", "scarlab"}, {"version", SCARLAB_VERSION}, {"subcommand", sub},   {"params", params},
         {"wall_time_s", wall}, {"outputs", files},         {"notes", o.notes}};
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write manifest " + path);
  out << m.dump(2) << '\n';
}

int dispatch(const std::vector<std::string>& args);

int rerun(const std::string& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ValidationError("cannot read manifest " + manifest);
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw ValidationError(manifest + ": " + e.what());
  }
  std::vector<std::string> args{m.at("subcommand").get<std::string>()};
  for (const auto& [name, vals] : m.at("params").items()) {
    args.push_back(name);
    for (const auto& v : vals) args.push_back(v.get<std::string>());
  }
  args.push_back("--manifest");
  args.push_back(manifest + ".rerun.json");
  const int rc = dispatch(args);
  if (rc != 0) return rc;
  int mismatches = 0;
  for (const auto& f : m.at("outputs")) {
    const std::string path = f.at("path"), want = f.at("sha256");
    const std::string got = sha256_file(path);
    if (got != want) {
      std::cerr << "hash mismatch: " << path << "\n  manifest " << want << "\n  now      " << got << '\n';
      ++mismatches;
    }
  }
  if (mismatches) return 3;
  std::cout << "reproduced " << m.at("outputs").size() << " output(s)\n";
  return 0;
}

void apply_thread_cap() {
  if (const char* s = std::getenv("SCARLAB_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) openblas_set_num_threads(n);
  }
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"scarlab: PXP scar physics in the sublattice-symmetric subspace"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SCARLAB_VERSION);

  Common c;
  std::string manifest;
  auto common = [&](CLI::App* s, const std::string& def_out, bool needs_n = true) {
    auto* n = s->add_option("--N", c.N, "chain length");
    if (needs_n) n->required();
    s->add_option("--out", c.out, "output file")->default_val(def_out);
    s->add_option("--manifest", manifest, "manifest path (default <out>.manifest.json)");
  };
  auto timing = [&](CLI::App* s, double tmax) {
    s->add_option("--tmax", c.tmax, "final time")->default_val(tmax)->check(CLI::PositiveNumber);
    s->add_option("--dt", c.dt, "time step")->default_val(0.01)->check(CLI::PositiveNumber);
  };
  auto dense = [&](CLI::App* s) {
    s->add_option("--dense-limit", c.dense_limit, "largest dim K diagonalised densely")->default_val(5000);
  };

  auto* classes = app.add_subcommand("classes", "class sizes #(n1,n2)");
  std::string boundary = "pbc";
  common(classes, "classes.csv");
  classes->add_option("--boundary", boundary, "pbc or obc")->default_val("pbc");

  auto* ham = app.add_subcommand("hamiltonian", "projected Hamiltonian as COO triplets");
  common(ham, "h.csv");

  auto* qm = app.add_subcommand("quasimodes", "eigenmodes of H in K");
  common(qm, "qm.csv");
  dense(qm);

  auto* dyn = app.add_subcommand("dynamics", "Neel quench in K");
  int cut = 0;
  common(dyn, "traj.csv");
  timing(dyn, 10.0);
  dense(dyn);
  dyn->add_option("--cut", cut, "left block size for the entropy (default N/2, or N/2-1)");

  auto* ent = app.add_subcommand("entropy", "half-chain entanglement entropy");
  std::string series, state;
  bool random = false;
  unsigned seed = 1;
  common(ent, "entropy.csv", false);
  dense(ent);
  ent->add_option("--series", series, "trajectory CSV with a t column; needs --N");
  ent->add_option("--state", state, "JSON state {N, coefficients: [{n1, n2, re, im}]}");
  ent->add_flag("--random", random, "random normalised state in K; needs --N");
  ent->add_option("--seed", seed, "seed for --random")->default_val(1);
  ent->add_option("--cut", cut, "left block size (default: all even cuts for a single state)");

  auto* ed = app.add_subcommand("ed", "full-space exact diagonalisation oracle");
  bool spectrum = false, quench = false;
  int cap = ed::kDefaultCap;
  std::string snapshot;
  common(ed, "ed.csv");
  timing(ed, 10.0);
  ed->add_flag("--spectrum", spectrum, "full spectrum with Neel overlaps");
  ed->add_flag("--quench", quench, "Krylov Neel quench");
  ed->add_option("--cap-ed", cap, "largest N enumerated")->default_val(ed::kDefaultCap);
  ed->add_option("--snapshot", snapshot, "write the final quench state here");

  auto* fr = app.add_subcommand("frame", "maps over the phi = 0 section");
  std::string map = "dfs";
  int mode = -1, grid = 101;
  double eps = -1;
  common(fr, "frame.csv");
  fr->add_option("--map", map, "dfs, var, nu or wavefn")->default_val("dfs");
  fr->add_option("--mode", mode, "quasimode index (ascending energy) for wavefn");
  fr->add_option("--grid", grid, "points per axis")->default_val(101);
  fr->add_option("--eps", eps, "regulariser for inverse powers (default automatic)");

  auto* fl = app.add_subcommand("flow", "variational flow on the phi = 0 section");
  std::string curve_out = "curve.csv", curve_mode = "transformed";
  double th1 = M_PI - 1e-3, th2 = 1e-3;
  common(fl, "flow.csv");
  timing(fl, 10.0);
  fl->add_option("--grid", grid, "points per axis")->default_val(41);
  fl->add_option("--curve", curve_out, "integral curve CSV")->default_val("curve.csv");
  fl->add_option("--curve-mode", curve_mode, "original or transformed")->default_val("transformed");
  fl->add_option("--theta1", th1, "curve start")->default_val(M_PI - 1e-3);
  fl->add_option("--theta2", th2, "curve start")->default_val(1e-3);

  auto* sc = app.add_subcommand("scaling", "sweeps over N");
  std::string quantity = "f1", nlist;
  common(sc, "scaling.csv", false);
  timing(sc, 7.0);
  dense(sc);
  sc->add_option("--quantity", quantity, "f1, dfs or resolution")->default_val("f1");
  sc->add_option("--N-list", nlist, "a:b:step or comma list")->required();

  auto* rd = app.add_subcommand("render", "static SVG from a CSV");
  std::string rin, kind = "scatter", cx, cy, cz;
  rd->add_option("--in", rin, "input CSV")->required();
  rd->add_option("--kind", kind, "scatter, heatmap or lines")->default_val("scatter");
  rd->add_option("--x", cx, "x column (default first)");
  rd->add_option("--y", cy, "y column (default second)");
  rd->add_option("--z", cz, "value column for heatmap (default third)");
  rd->add_option("--out", c.out, "output SVG")->default_val("plot.svg");
  rd->add_option("--manifest", manifest, "manifest path (default <out>.manifest.json)");

  auto* rn = app.add_subcommand("run", "re-run a manifest and compare output hashes");
  std::string from;
  rn->add_option("--from-manifest", from, "manifest JSON")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (rn->parsed()) return rerun(from);

  apply_thread_cap();
  const auto t0 = std::chrono::steady_clock::now();
  Outputs o;
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "classes") cmd_classes(c, boundary, o);
  else if (name == "hamiltonian") cmd_hamiltonian(c, o);
  else if (name == "quasimodes") cmd_quasimodes(c, o);
  else if (name == "dynamics") cmd_dynamics(c, cut, o);
  else if (name == "entropy") cmd_entropy(c, series, state, random, seed, cut, o);
  else if (name == "ed") cmd_ed(c, spectrum, quench, cap, snapshot, o);
  else if (name == "frame") cmd_frame(c, map, mode, grid, eps, o);
  else if (name == "flow") cmd_flow(c, grid, curve_out, curve_mode, th1, th2, o);
  else if (name == "scaling") cmd_scaling(c, quantity, nlist, o);
  else if (name == "render") {
    render_svg(read_csv(rin), kind, cx, cy, cz, c.out);
    o.files.push_back(c.out);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(manifest.empty() ? c.out + ".manifest.json" : manifest, name, collect_params(*sub), wall, o);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }

}  // namespace scarlab::cli
