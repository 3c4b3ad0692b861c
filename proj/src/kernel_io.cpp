#include "ergolab/kernel/io.hpp"

#include <fstream>
#include <sstream>

namespace ergolab::kernel::io {
namespace {

json measure_list_to_json(const std::vector<DiscreteMeasure>& measures) {
  json arr = json::array();
  for (const auto& mu : measures) arr.push_back(measure_to_json(mu));
  return arr;
}

}  // namespace

json rate_matrix_to_json(const RateMatrix& gen) {
  json rows = json::array();
  for (int i = 0; i < gen.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < gen.size(); ++j) row.push_back(gen.rate(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", gen.size()}, {"rates", std::move(rows)}};
}

RateMatrix rate_matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rates") || !j["rates"].is_array())
    throw std::domain_error("rate matrix JSON needs a \"rates\" array");
  const auto& rows = j["rates"];
  const int n = j.contains("n") ? j["n"].get<int>() : static_cast<int>(rows.size());
  if (n < 1 || static_cast<int>(rows.size()) != n)
    throw std::domain_error("rate matrix JSON row count disagrees with n");
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw std::domain_error("rate matrix JSON rows must all have length n");
    for (int jj = 0; jj < n; ++jj) {
      if (!rows[i][jj].is_number()) throw std::domain_error("rate matrix entries must be numbers");
      m(i, jj) = rows[i][jj].get<double>();
    }
  }
  return RateMatrix(std::move(m));
}

std::string rate_matrix_to_text(const RateMatrix& gen) {
  std::ostringstream os;
  os.precision(17);
  os << gen.size() << "\n";
  for (int i = 0; i < gen.size(); ++i) {
    for (int j = 0; j < gen.size(); ++j) {
      if (j) os << " ";
      os << gen.rate(i, j);
    }
    os << "\n";
  }
  return os.str();
}

RateMatrix rate_matrix_from_text(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  if (!(is >> n) || n < 1) throw std::domain_error("rate matrix text must start with a positive size");
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(is >> m(i, j))) {
        std::ostringstream os;
        os << "rate matrix text ended early at row " << i << ", column " << j;
        throw std::domain_error(os.str());
      }
    }
  }
  double extra;
  if (is >> extra) throw std::domain_error("rate matrix text has trailing entries");
  return RateMatrix(std::move(m));
}

RateMatrix rate_matrix_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open rate matrix file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") return rate_matrix_from_json(json::parse(buf.str()));
  return rate_matrix_from_text(buf.str());
}

json measure_to_json(const DiscreteMeasure& mu) {
  json arr = json::array();
  for (int i = 0; i < mu.size(); ++i) arr.push_back(mu[i]);
  return arr;
}

DiscreteMeasure measure_from_json(const json& j, bool normalized) {
  if (!j.is_array() || j.empty()) throw std::domain_error("measure JSON must be a non-empty array");
  Vec w(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::domain_error("measure weights must be numbers");
    w(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return DiscreteMeasure(std::move(w), normalized);
}

json invariance_check_to_json(const InvarianceCheck& c) {
  return json{{"invariant", c.invariant},
              {"semigroupResidual", c.semigroup_residual},
              {"resolventResidual", c.resolvent_residual},
              {"tGrid", c.t_grid},
              {"alpha", c.alpha},
              {"tolerance", c.tolerance}};
}

json domination_to_json(const DominationCertificate& c) {
  json j{{"holds", c.holds}, {"alpha", c.alpha}};
  if (c.witness) j["witness"] = json{{"state", c.witness->first}, {"target", c.witness->second}};
  if (c.support_consequence) j["supportConsequence"] = *c.support_consequence;
  return j;
}

json uniqueness_to_json(const UniquenessReport& r) {
  return json{{"invariantDim", r.invariant_dim},
              {"measures", measure_list_to_json(r.measures)},
              {"irreducible", r.irreducible},
              {"domination", domination_to_json(r.domination)},
              {"verdict", to_string(r.verdict)}};
}

json absorbing_to_json(const AbsorbingDecomposition& d) {
  return json{{"bPlus", d.b_plus},
              {"bMinus", d.b_minus},
              {"residual", d.residual},
              {"iterationsPlus", d.iterations_plus},
              {"iterationsMinus", d.iterations_minus}};
}

json kernel_to_json(const StochasticKernel& k) {
  json rows = json::array();
  for (int i = 0; i < k.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < k.size(); ++j) row.push_back(k(i, j));
    rows.push_back(std::move(row));
  }
  const char* kind = "custom";
  switch (k.label().kind) {
    case KernelKind::semigroup: kind = "semigroup"; break;
    case KernelKind::resolvent: kind = "resolvent"; break;
    case KernelKind::skeleton_average: kind = "skeleton-average"; break;
    case KernelKind::product: kind = "product"; break;
    case KernelKind::custom: break;
  }
  return json{{"n", k.size()}, {"kind", kind}, {"param", k.label().param}, {"p", std::move(rows)}};
}

}  // namespace ergolab::kernel::io
