#include "ergolab/sim/process.hpp"

#include <cmath>
#include <sstream>

#include "ergolab/kernel/io.hpp"

namespace ergolab::sim {
namespace {

using nlohmann::json;

std::string format_params(const json& j) {
  return j.is_null() ? std::string{} : j.dump();
}

std::vector<double> parse_point(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    std::ostringstream os;
    os << what << " must be an array of length " << dim;
    throw std::domain_error(os.str());
  }
  std::vector<double> out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = j[i].get<double>();
  return out;
}

}  // namespace

std::string process_kind(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) return "finite-ctmc";
        if constexpr (std::is_same_v<T, EllipticDiffusionSpec>) return "elliptic-diffusion";
        if constexpr (std::is_same_v<T, LangevinSpec>) return "langevin";
        if constexpr (std::is_same_v<T, GlauberIsingSpec>) return "glauber-ising";
        if constexpr (std::is_same_v<T, QuasiFellerDemoSpec>) return "quasi-feller-demo";
      },
      spec);
}

std::string process_id(const ProcessSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << process_kind(spec) << ":";
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) {
          os << "n=" << s.rates.size() << ",x0=" << s.x0;
        } else if constexpr (std::is_same_v<T, EllipticDiffusionSpec>) {
          os << (s.preset.empty() ? "custom" : s.preset) << ",dim=" << s.dim << ",h=" << s.step
             << "," << format_params(s.params);
        } else if constexpr (std::is_same_v<T, LangevinSpec>) {
          os << (s.preset.empty() ? "custom" : s.preset) << ",dim=" << s.dim << ",gamma=" << s.gamma
             << ",sigma=" << s.sigma << ",h=" << s.step;
        } else if constexpr (std::is_same_v<T, GlauberIsingSpec>) {
          os << "side=" << s.side << ",beta=" << s.beta << ",init="
             << (s.init == IsingInit::all_plus ? "all-plus"
                                               : s.init == IsingInit::all_minus ? "all-minus" : "random");
        } else if constexpr (std::is_same_v<T, QuasiFellerDemoSpec>) {
          os << "x0=" << s.x0 << ",d=" << s.discontinuity << ",w=" << s.half_width;
        }
      },
      spec);
  return os.str();
}

int sample_dim(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) {
          (void)s;
          return 1;
        } else if constexpr (std::is_same_v<T, EllipticDiffusionSpec>) {
          return s.dim;
        } else if constexpr (std::is_same_v<T, LangevinSpec>) {
          return 2 * s.dim;
        } else if constexpr (std::is_same_v<T, GlauberIsingSpec>) {
          (void)s;
          return 1;  // magnetization
        } else {
          (void)s;
          return 1;
        }
      },
      spec);
}

void validate(const ProcessSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) {
          if (s.x0 < 0 || s.x0 >= s.rates.size())
            throw std::domain_error("initial state out of range");
        } else if constexpr (std::is_same_v<T, EllipticDiffusionSpec>) {
          if (s.dim < 1) throw std::domain_error("diffusion dimension must be >= 1");
          if (!s.drift || !s.sigma) throw std::domain_error("diffusion needs drift and sigma callables");
          if (!(s.sigma_min > 0.0))
            throw std::domain_error("diffusion needs a positive ellipticity floor");
          if (!(s.step > 0.0)) throw std::domain_error("step size must be positive");
          if (static_cast<int>(s.x0.size()) != s.dim)
            throw std::domain_error("x0 dimension mismatch");
        } else if constexpr (std::is_same_v<T, LangevinSpec>) {
          if (s.dim < 1) throw std::domain_error("spatial dimension must be >= 1");
          if (!s.grad_potential || !s.potential)
            throw std::domain_error("kinetic spec needs potential and gradient callables");
          if (!(s.gamma > 0.0)) throw std::domain_error("friction must be positive");
          if (!(s.sigma > 0.0)) throw std::domain_error("noise amplitude must be positive");
          if (!(s.step > 0.0)) throw std::domain_error("step size must be positive");
          if (static_cast<int>(s.x0.size()) != s.dim || static_cast<int>(s.v0.size()) != s.dim)
            throw std::domain_error("x0/v0 dimension mismatch");
        } else if constexpr (std::is_same_v<T, GlauberIsingSpec>) {
          if (s.side < 2) throw std::domain_error("lattice side must be >= 2");
          if (!(s.beta >= 0.0)) throw std::domain_error("inverse temperature must be >= 0");
        } else if constexpr (std::is_same_v<T, QuasiFellerDemoSpec>) {
          if (!(s.x0 >= 0.0 && s.x0 <= 1.0)) throw std::domain_error("x0 must lie in [0,1]");
          if (!(s.discontinuity > 0.0 && s.discontinuity < 1.0))
            throw std::domain_error("discontinuity must lie in (0,1)");
          if (!(s.half_width > 0.0 && s.half_width <= 0.5))
            throw std::domain_error("half-width must lie in (0, 0.5]");
          if (!(s.uniform_weight > 0.0 && s.uniform_weight < 1.0))
            throw std::domain_error("mixture weight must lie in (0,1)");
        }
      },
      spec);
}

EllipticDiffusionSpec make_elliptic_preset(const std::string& name, int dim, double sigma,
                                           double step, std::vector<double> x0) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
  EllipticDiffusionSpec spec;
  spec.dim = dim;
  spec.step = step;
  spec.x0 = std::move(x0);
  spec.preset = name;
  spec.sigma = [sigma](std::span<const double>) { return sigma; };
  spec.sigma_min = sigma;
  spec.params = nlohmann::json{{"sigma", sigma}};
  if (name == "ou") {
    spec.drift = [](std::span<const double> x, std::span<double> b) {
      for (std::size_t i = 0; i < x.size(); ++i) b[i] = -x[i];
    };
  } else if (name == "double-well") {
    spec.drift = [](std::span<const double> x, std::span<double> b) {
      for (std::size_t i = 0; i < x.size(); ++i) b[i] = x[i] - x[i] * x[i] * x[i];
    };
  } else if (name == "brownian") {
    spec.drift = [](std::span<const double>, std::span<double> b) {
      for (auto& v : b) v = 0.0;
    };
  } else if (name == "drift-to-zero") {
    // Discontinuous at the origin; pushes each coordinate toward 0 at unit
    // rate.
    spec.drift = [](std::span<const double> x, std::span<double> b) {
      for (std::size_t i = 0; i < x.size(); ++i) b[i] = x[i] > 0.0 ? -1.0 : (x[i] < 0.0 ? 1.0 : 0.0);
    };
  } else {
    throw std::domain_error("unknown diffusion preset: " + name);
  }
  return spec;
}

LangevinSpec make_langevin_preset(const std::string& name, int dim, double gamma, double sigma,
                                  double step, std::vector<double> x0, std::vector<double> v0) {
  LangevinSpec spec;
  spec.dim = dim;
  spec.gamma = gamma;
  spec.sigma = sigma;
  spec.step = step;
  spec.x0 = std::move(x0);
  spec.v0 = std::move(v0);
  spec.preset = name;
  if (name == "harmonic") {
    spec.potential = [](std::span<const double> x) {
      double u = 0.0;
      for (double xi : x) u += 0.5 * xi * xi;
      return u;
    };
    spec.grad_potential = [](std::span<const double> x, std::span<double> g) {
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i];
    };
  } else if (name == "double-well") {
    spec.potential = [](std::span<const double> x) {
      double u = 0.0;
      for (double xi : x) u += 0.25 * xi * xi * xi * xi - 0.5 * xi * xi;
      return u;
    };
    spec.grad_potential = [](std::span<const double> x, std::span<double> g) {
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] * x[i] * x[i] - x[i];
    };
  } else {
    throw std::domain_error("unknown potential preset: " + name);
  }
  return spec;
}

nlohmann::json spec_to_json(const ProcessSpec& spec) {
  json j{{"kind", process_kind(spec)}};
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) {
          j["rates"] = kernel::io::rate_matrix_to_json(s.rates)["rates"];
          j["x0"] = s.x0;
        } else if constexpr (std::is_same_v<T, EllipticDiffusionSpec>) {
          if (s.preset.empty())
            throw std::domain_error("cannot serialize a diffusion with custom callables");
          j["preset"] = s.preset;
          j["dim"] = s.dim;
          j["sigma"] = s.params.value("sigma", s.sigma_min);
          j["h"] = s.step;
          j["x0"] = s.x0;
        } else if constexpr (std::is_same_v<T, LangevinSpec>) {
          if (s.preset.empty())
            throw std::domain_error("cannot serialize a kinetic spec with custom callables");
          j["potential"] = s.preset;
          j["dim"] = s.dim;
          j["gamma"] = s.gamma;
          j["sigma"] = s.sigma;
          j["h"] = s.step;
          j["x0"] = s.x0;
          j["v0"] = s.v0;
        } else if constexpr (std::is_same_v<T, GlauberIsingSpec>) {
          j["side"] = s.side;
          j["beta"] = s.beta;
          j["init"] = s.init == IsingInit::all_plus ? "all-plus"
                      : s.init == IsingInit::all_minus ? "all-minus"
                                                        : "random";
        } else if constexpr (std::is_same_v<T, QuasiFellerDemoSpec>) {
          j["x0"] = s.x0;
          j["discontinuity"] = s.discontinuity;
          j["halfWidth"] = s.half_width;
          j["uniformWeight"] = s.uniform_weight;
        }
      },
      spec);
  return j;
}

ProcessSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::domain_error("process spec needs a \"kind\" field");
  const std::string kind = j["kind"].get<std::string>();
  ProcessSpec spec = [&]() -> ProcessSpec {
    if (kind == "finite-ctmc") {
      json rates_json{{"rates", j.at("rates")}};
      FiniteCtmcSpec s{kernel::io::rate_matrix_from_json(rates_json), j.value("x0", 0)};
      return s;
    }
    if (kind == "elliptic-diffusion") {
      const int dim = j.value("dim", 1);
      std::vector<double> x0 =
          j.contains("x0") ? parse_point(j["x0"], dim, "x0") : std::vector<double>(dim, 0.0);
      return make_elliptic_preset(j.value("preset", std::string{}), dim, j.value("sigma", 1.0),
                                  j.value("h", 0.01), std::move(x0));
    }
    if (kind == "langevin") {
      const int dim = j.value("dim", 1);
      std::vector<double> x0 =
          j.contains("x0") ? parse_point(j["x0"], dim, "x0") : std::vector<double>(dim, 0.0);
      std::vector<double> v0 =
          j.contains("v0") ? parse_point(j["v0"], dim, "v0") : std::vector<double>(dim, 0.0);
      return make_langevin_preset(j.value("potential", std::string{}), dim, j.value("gamma", 1.0),
                                  j.value("sigma", std::sqrt(2.0)), j.value("h", 0.01),
                                  std::move(x0), std::move(v0));
    }
    if (kind == "glauber-ising") {
      GlauberIsingSpec s;
      s.side = j.value("side", 16);
      s.beta = j.value("beta", 1.0);
      const std::string init = j.value("init", "all-plus");
      if (init == "all-plus") s.init = IsingInit::all_plus;
      else if (init == "all-minus") s.init = IsingInit::all_minus;
      else if (init == "random") s.init = IsingInit::random_iid;
      else throw std::domain_error("unknown init: " + init);
      return s;
    }
    if (kind == "quasi-feller-demo") {
      QuasiFellerDemoSpec s;
      s.x0 = j.value("x0", 0.25);
      s.discontinuity = j.value("discontinuity", 0.5);
      s.half_width = j.value("halfWidth", 0.25);
      s.uniform_weight = j.value("uniformWeight", 0.5);
      return s;
    }
    throw std::domain_error("unknown process kind: " + kind);
  }();
  validate(spec);
  return spec;
}

}  // namespace ergolab::sim
