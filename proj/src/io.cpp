#include "wrof/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wrof {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  return out;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  out << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << fmt17(v[i]);
  out << "]";
}

void write_points(std::ostream& out, const PointMatrix& pts) {
  out << "[";
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    out << (i ? "," : "") << "[";
    for (Eigen::Index k = 0; k < pts.cols(); ++k) out << (k ? "," : "") << fmt17(pts(i, k));
    out << "]";
  }
  out << "]";
}

const char* cost_tag_name(CostKind::Tag tag) {
  switch (tag) {
    case CostKind::Tag::Quadratic: return "quadratic";
    case CostKind::Tag::Euclidean: return "euclidean";
    case CostKind::Tag::Huber: return "huber";
  }
  return "?";
}

}  // namespace

DiscreteMeasure read_measure_json(const std::string& path) {
  nlohmann::json j;
  try {
    open_in(path) >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  if (!j.contains("dim") || !j.contains("points") || !j.contains("weights"))
    throw Error(Errc::ParseError, path + ": expected dim, points, weights");
  const int d = j["dim"].get<int>();
  const auto& jp = j["points"];
  const auto& jw = j["weights"];
  if (jp.size() != jw.size())
    throw Error(Errc::DimensionMismatch, path + ": points/weights length mismatch");
  PointMatrix pts(static_cast<Eigen::Index>(jp.size()), d);
  Eigen::VectorXd w(static_cast<Eigen::Index>(jw.size()));
  for (size_t i = 0; i < jp.size(); ++i) {
    if (static_cast<int>(jp[i].size()) != d)
      throw Error(Errc::DimensionMismatch, path + ": point dimension mismatch");
    for (int k = 0; k < d; ++k) pts(static_cast<Eigen::Index>(i), k) = jp[i][k].get<double>();
    w[static_cast<Eigen::Index>(i)] = jw[i].get<double>();
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure read_measure_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, path + ": bad number '" + cell + "'");
      }
    }
    if (row.size() < 2) throw Error(Errc::ParseError, path + ": need at least x1,w per row");
    if (!rows.empty() && rows.back().size() != row.size())
      throw Error(Errc::ParseError, path + ": inconsistent column counts");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::EmptyMeasure, path + ": no rows");
  const int d = static_cast<int>(rows[0].size()) - 1;
  PointMatrix pts(static_cast<Eigen::Index>(rows.size()), d);
  Eigen::VectorXd w(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < d; ++k) pts(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<size_t>(k)];
    w[static_cast<Eigen::Index>(i)] = rows[i].back();
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure read_measure_pgm(const std::string& path) {
  std::ifstream in = open_in(path, true);
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") throw Error(Errc::ParseError, path + ": not a PGM file");
  auto next_token = [&in, &path]() -> long {
    // Skip whitespace and '#' comments.
    for (;;) {
      int ch = in.peek();
      if (ch == '#') {
        std::string comment;
        std::getline(in, comment);
      } else if (std::isspace(ch)) {
        in.get();
      } else {
        break;
      }
    }
    long v;
    if (!(in >> v)) throw Error(Errc::ParseError, path + ": truncated PGM header");
    return v;
  };
  const long w = next_token();
  const long h = next_token();
  const long maxval = next_token();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    throw Error(Errc::ParseError, path + ": bad PGM header");
  Eigen::MatrixXd values(h, w);
  if (magic == "P2") {
    for (long r = 0; r < h; ++r)
      for (long c = 0; c < w; ++c) values(r, c) = static_cast<double>(next_token());
  } else {
    in.get();  // single whitespace after maxval
    const bool wide = maxval > 255;
    for (long r = 0; r < h; ++r)
      for (long c = 0; c < w; ++c) {
        int hi = in.get();
        long v = hi;
        if (wide) {
          int lo = in.get();
          v = (hi << 8) | lo;
        }
        if (hi < 0) throw Error(Errc::ParseError, path + ": truncated PGM data");
        values(r, c) = static_cast<double>(v);
      }
  }
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, 1.0;
  return from_grayscale_grid(values, BoxDomain(lo, hi));
}

DiscreteMeasure read_measure(const std::string& path) {
  const size_t dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "json") return read_measure_json(path);
  if (ext == "csv") return read_measure_csv(path);
  if (ext == "pgm") return read_measure_pgm(path);
  throw Error(Errc::ParseError, path + ": unknown measure format (want .json/.csv/.pgm)");
}

void write_measure_json(const std::string& path, const DiscreteMeasure& m) {
  std::ofstream out = open_out(path);
  out << "{\"dim\":" << m.dim() << ",\"points\":";
  write_points(out, m.points());
  out << ",\"weights\":";
  write_vector(out, m.weights());
  out << "}\n";
}

void write_measure_csv(const std::string& path, const DiscreteMeasure& m) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    for (Eigen::Index k = 0; k < m.dim(); ++k) out << fmt17(m.points()(i, k)) << ",";
    out << fmt17(m.weights()[i]) << "\n";
  }
}

void write_plan_json(const std::string& path, const TransportPlan& plan) {
  std::ofstream out = open_out(path);
  out << "{\"cost\":\"" << cost_tag_name(plan.cost.tag) << "\"";
  if (plan.cost.tag == CostKind::Tag::Huber) out << ",\"lambda\":" << fmt17(plan.cost.lambda);
  out << ",\"value\":" << fmt17(plan.value) << ",\"entries\":[";
  for (size_t e = 0; e < plan.entries.size(); ++e) {
    const PlanEntry& p = plan.entries[e];
    out << (e ? "," : "") << "[" << p.source << "," << p.target << "," << fmt17(p.mass) << "]";
  }
  out << "],\"source_potential\":";
  write_vector(out, plan.source_potential);
  out << ",\"target_potential\":";
  write_vector(out, plan.target_potential);
  out << "}\n";
}

void write_wrof_json(const std::string& path, const WrofSolution& solution,
                     const std::pair<double, double>& sandwich, const SplitMasses& split) {
  std::ofstream out = open_out(path);
  out << "{\"lambda\":" << fmt17(solution.lambda) << ",\"value\":" << fmt17(solution.value)
      << ",\"w2sq_mu_rho\":" << fmt17(solution.w2sq_mu_rho)
      << ",\"w1_rho_nu\":" << fmt17(solution.w1_rho_nu)
      << ",\"divergence\":" << fmt17(solution.divergence)
      << ",\"sandwich_upper\":" << fmt17(sandwich.first)
      << ",\"sandwich_lower\":" << fmt17(sandwich.second)
      << ",\"mass_small\":" << fmt17(split.mass_small)
      << ",\"mass_large\":" << fmt17(split.mass_large)
      << ",\"max_displacement\":" << fmt17(solution.max_displacement) << ",\"rho\":{\"dim\":"
      << solution.rho.dim() << ",\"points\":";
  write_points(out, solution.rho.points());
  out << ",\"weights\":";
  write_vector(out, solution.rho.weights());
  out << "},\"huber_plan_entries\":[";
  for (size_t e = 0; e < solution.huber_plan.entries.size(); ++e) {
    const PlanEntry& p = solution.huber_plan.entries[e];
    out << (e ? "," : "") << "[" << p.source << "," << p.target << "," << fmt17(p.mass) << "]";
  }
  out << "]}\n";
}

void write_displacement_csv(const std::string& path, const WrofSolution& solution,
                            const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::ofstream out = open_out(path);
  out << "displacement,mass\n";
  for (const PlanEntry& e : solution.huber_plan.entries) {
    const double r = (mu.point(e.source) - nu.point(e.target)).norm();
    out << fmt17(r) << "," << fmt17(e.mass) << "\n";
  }
}

void write_trace_csv(const std::string& path, const IterationTrace& trace) {
  std::ofstream out = open_out(path);
  out << "n,lambda,w1_to_nu,mass_large\n";
  for (const IterationStage& s : trace.stages)
    out << s.n << "," << fmt17(s.lambda) << "," << fmt17(s.w1_to_nu) << ","
        << fmt17(s.mass_large) << "\n";
}

void write_trace_json(const std::string& path, const IterationTrace& trace) {
  std::ofstream out = open_out(path);
  out << "{\"stages\":[";
  for (size_t i = 0; i < trace.stages.size(); ++i) {
    const IterationStage& s = trace.stages[i];
    out << (i ? "," : "") << "{\"n\":" << s.n << ",\"lambda\":" << fmt17(s.lambda)
        << ",\"w1_to_nu\":" << fmt17(s.w1_to_nu) << ",\"mass_large\":" << fmt17(s.mass_large)
        << "}";
  }
  out << "],\"final_w1\":" << fmt17(trace.final_w1) << "}\n";
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
  std::ofstream out = open_out(path);
  out << "n,lambda,w2sq_before,divergence,w1_term,w2sq_after\n";
  for (const LedgerStage& s : ledger.stages)
    out << s.n << "," << fmt17(s.lambda) << "," << fmt17(s.w2sq_before) << ","
        << fmt17(s.divergence) << "," << fmt17(s.w1_term) << "," << fmt17(s.w2sq_after)
        << "\n";
}

void write_ledger_json(const std::string& path, const EnergyLedger& ledger) {
  std::ofstream out = open_out(path);
  out << "{\"total_left\":" << fmt17(ledger.total_left)
      << ",\"residual\":" << fmt17(ledger.residual) << ",\"stages\":[";
  for (size_t i = 0; i < ledger.stages.size(); ++i) {
    const LedgerStage& s = ledger.stages[i];
    out << (i ? "," : "") << "{\"n\":" << s.n << ",\"lambda\":" << fmt17(s.lambda)
        << ",\"w2sq_before\":" << fmt17(s.w2sq_before)
        << ",\"divergence\":" << fmt17(s.divergence) << ",\"w1_term\":" << fmt17(s.w1_term)
        << ",\"w2sq_after\":" << fmt17(s.w2sq_after) << "}";
  }
  out << "]}\n";
}

void write_verify_json(const std::string& path, const VerifyReport& report) {
  std::ofstream out = open_out(path);
  out << "{\"suite\":\"" << report.suite << "\",\"seed\":" << report.seed
      << ",\"requested\":" << report.requested << ",\"pass\":"
      << (report.pass ? "true" : "false") << ",\"instances\":[";
  for (size_t i = 0; i < report.instances.size(); ++i) {
    const InstanceOutcome& inst = report.instances[i];
    out << (i ? "," : "") << "{\"index\":" << inst.index << ",\"pass\":"
        << (inst.pass() ? "true" : "false");
    if (inst.skipped) out << ",\"skipped\":true,\"reason\":\"" << inst.skip_reason << "\"";
    out << ",\"checks\":[";
    for (size_t c = 0; c < inst.checks.size(); ++c) {
      const CheckOutcome& chk = inst.checks[c];
      out << (c ? "," : "") << "{\"name\":\"" << chk.name << "\",\"pass\":"
          << (chk.pass ? "true" : "false") << ",\"measured\":" << fmt17(chk.measured)
          << ",\"bound\":" << fmt17(chk.bound) << "}";
    }
    out << "]}";
  }
  out << "]}\n";
}

}  // namespace wrof
