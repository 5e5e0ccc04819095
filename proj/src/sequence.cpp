#include "momentdet/sequence.hpp"

#include <sstream>

namespace momentdet {

namespace {

std::pair<std::string, std::vector<std::string>> split_spec(
    const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  std::string name = spec.substr(0, colon);
  std::vector<std::string> params;
  std::stringstream rest(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(rest, tok, ',')) params.push_back(tok);
  return {name, params};
}

Rational factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

Rational double_factorial_odd(std::size_t n) {
  // (2n-1)!! with the empty product at n = 0.
  Integer f = 1;
  for (std::size_t i = 1; i <= n; ++i) f *= 2 * i - 1;
  return Rational(f);
}

}  // namespace

PositiveSequence::PositiveSequence(Generator gen, std::size_t window,
                                   ScalarMode mode, unsigned precision_bits,
                                   std::string name)
    : gen_(std::move(gen)),
      window_(window),
      mode_(mode),
      precision_bits_(precision_bits == 0 ? kDefaultPrecisionBits
                                          : precision_bits),
      name_(std::move(name)),
      cache_(std::make_shared<Cache>()) {}

PositiveSequence PositiveSequence::from_values(std::vector<Scalar> values,
                                               ScalarMode mode,
                                               unsigned precision_bits,
                                               std::string name) {
  auto shared = std::make_shared<std::vector<Scalar>>(std::move(values));
  std::size_t window = shared->empty() ? 0 : shared->size() - 1;
  return PositiveSequence(
      [shared](std::size_t n) -> Scalar {
        if (n >= shared->size())
          throw WindowError("sequence literal has no value at index " +
                            std::to_string(n));
        return (*shared)[n];
      },
      window, mode, precision_bits, std::move(name));
}

const Scalar& PositiveSequence::at(std::size_t n) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->values.find(n);
  if (it == cache_->values.end()) {
    Scalar v = gen_(n);
    if (!v.is_positive())
      throw InvalidSequenceError("non-positive value at index " +
                                 std::to_string(n) + " in sequence " + name_);
    it = cache_->values.emplace(n, std::move(v)).first;
  }
  return it->second;
}

Real PositiveSequence::at_real(std::size_t n) const { return at(n).real(); }

PositiveSequence PositiveSequence::shift(std::size_t k) const {
  PositiveSequence base = *this;
  return PositiveSequence(
      [base, k](std::size_t n) { return base.at(n + k); }, window_, mode_,
      precision_bits_, name_ + ".shift" + std::to_string(k));
}

PositiveSequence PositiveSequence::subsample(std::size_t j) const {
  if (j < 1) throw std::invalid_argument("subsample step must be >= 1");
  PositiveSequence base = *this;
  return PositiveSequence(
      [base, j](std::size_t n) { return base.at(j * n); },
      window_ / j, mode_, precision_bits_,
      name_ + ".sub" + std::to_string(j));
}

PositiveSequence PositiveSequence::root(std::size_t j, unsigned bits) const {
  if (j < 1) throw std::invalid_argument("root order must be >= 1");
  if (j == 1) return *this;
  unsigned out_bits = bits == 0 ? precision_bits_ : bits;
  PositiveSequence base = *this;
  // j-th roots of rationals are irrational in general; the result lives in
  // float mode at an explicit precision.
  return PositiveSequence(
      [base, j, out_bits](std::size_t n) -> Scalar {
        PrecisionGuard guard(out_bits);
        Real v = base.at(n).real();
        return Scalar(Real(boost::multiprecision::pow(v, Real(1) / Real(j))));
      },
      window_, ScalarMode::kFloat, out_bits,
      name_ + ".root" + std::to_string(j));
}

PositiveSequence PositiveSequence::scale(const Scalar& delta) const {
  if (!delta.is_positive())
    throw std::invalid_argument("scale factor must be positive");
  ScalarMode out_mode =
      delta.is_rational() ? mode_ : ScalarMode::kFloat;
  PositiveSequence base = *this;
  return PositiveSequence(
      [base, delta](std::size_t n) -> Scalar { return delta * base.at(n); }, window_,
      out_mode, precision_bits_, name_ + ".scaled");
}

PositiveSequence PositiveSequence::with_window(std::size_t window) const {
  PositiveSequence out = *this;
  out.window_ = window;
  return out;
}

PositiveSequence PositiveSequence::as_float(unsigned bits) const {
  unsigned out_bits = bits == 0 ? precision_bits_ : bits;
  if (mode_ == ScalarMode::kFloat && out_bits == precision_bits_) return *this;
  PositiveSequence base = *this;
  return PositiveSequence(
      [base, out_bits](std::size_t n) -> Scalar {
        PrecisionGuard guard(out_bits);
        return Scalar(base.at(n).real());
      },
      window_, ScalarMode::kFloat, out_bits, name_ + ".float");
}

PositiveSequence PositiveSequence::builtin(const std::string& spec,
                                           std::size_t window, ScalarMode mode,
                                           unsigned precision_bits) {
  auto [name, params] = split_spec(spec);
  auto need = [&](std::size_t k) {
    if (params.size() < k)
      throw std::invalid_argument("generator " + name + " needs " +
                                  std::to_string(k) + " parameter(s)");
  };
  if (name == "factorial")
    return PositiveSequence([](std::size_t n) { return Scalar(factorial(n)); },
                            window, mode, precision_bits, "factorial");
  if (name == "nfact2")
    return PositiveSequence(
        [](std::size_t n) {
          Rational f = factorial(n);
          return Scalar(Rational(f * f));
        },
        window, mode, precision_bits, "nfact2");
  if (name == "nfact3")
    return PositiveSequence(
        [](std::size_t n) {
          Rational f = factorial(n);
          return Scalar(Rational(f * f * f));
        },
        window, mode, precision_bits, "nfact3");
  if (name == "constant") {
    Rational c = params.empty() ? Rational(1) : parse_rational(params[0]);
    if (c.sign() <= 0) throw std::invalid_argument("constant must be positive");
    return PositiveSequence([c](std::size_t) { return Scalar(c); }, window,
                            mode, precision_bits, "constant");
  }
  if (name == "geometric") {
    need(1);
    Rational c = parse_rational(params[0]);
    if (c.sign() <= 0)
      throw std::invalid_argument("geometric ratio must be positive");
    return PositiveSequence(
        [c](std::size_t n) {
          return Scalar(rat_pow(c, static_cast<unsigned>(n)));
        },
        window, mode, precision_bits, "geometric");
  }
  if (name == "expsq") {
    // e^{n^2}: irrational, always float mode.
    unsigned bits = precision_bits == 0 ? kDefaultPrecisionBits : precision_bits;
    return PositiveSequence(
        [bits](std::size_t n) -> Scalar {
          PrecisionGuard guard(bits);
          return Scalar(Real(exp(Real(n) * Real(n))));
        },
        window, ScalarMode::kFloat, bits, "expsq");
  }
  if (name == "gaussian_even") {
    // M_n = (2n-1)!! sigma^{2n}: even moments of a centered Gaussian.
    Rational sigma = params.empty() ? Rational(1) : parse_rational(params[0]);
    if (sigma.sign() <= 0) throw std::invalid_argument("sigma must be positive");
    return PositiveSequence(
        [sigma](std::size_t n) {
          return Scalar(Rational(double_factorial_odd(n) *
                                 rat_pow(sigma, static_cast<unsigned>(2 * n))));
        },
        window, mode, precision_bits, "gaussian_even");
  }
  if (name == "lognormal_even") {
    // M_n = e^{2 n^2 sigma^2}: even moments of a lognormal, always float.
    double s = params.empty() ? 1.0 : std::stod(params[0]);
    unsigned bits = precision_bits == 0 ? kDefaultPrecisionBits : precision_bits;
    return PositiveSequence(
        [s, bits](std::size_t n) -> Scalar {
          PrecisionGuard guard(bits);
          return Scalar(Real(exp(Real(2 * s * s) * Real(n) * Real(n))));
        },
        window, ScalarMode::kFloat, bits, "lognormal_even");
  }
  throw std::invalid_argument("unknown sequence generator: " + name);
}

std::vector<std::string> PositiveSequence::builtin_names() {
  return {"factorial", "nfact2",           "nfact3",        "constant",
          "geometric", "expsq",            "gaussian_even", "lognormal_even"};
}

PositiveSequence PositiveSequence::from_json(const nlohmann::json& j) {
  ScalarMode mode = ScalarMode::kRational;
  if (j.contains("mode")) {
    std::string m = j.at("mode").get<std::string>();
    if (m == "float")
      mode = ScalarMode::kFloat;
    else if (m != "rational")
      throw std::invalid_argument("unknown scalar mode: " + m);
  }
  unsigned bits = j.value("precision_bits", kDefaultPrecisionBits);
  if (j.contains("generator")) {
    std::string spec = j.at("generator").get<std::string>();
    if (j.contains("params")) {
      spec += ":";
      bool first = true;
      for (const auto& p : j.at("params")) {
        if (!first) spec += ",";
        spec += p.is_string() ? p.get<std::string>() : p.dump();
        first = false;
      }
    }
    return builtin(spec, j.value("window", std::size_t{64}), mode, bits);
  }
  if (!j.contains("values"))
    throw std::invalid_argument("sequence JSON needs 'values' or 'generator'");
  PrecisionGuard guard(bits);
  std::vector<Scalar> values;
  for (const auto& v : j.at("values")) {
    if (v.is_string())
      values.push_back(Scalar::parse(v.get<std::string>(), mode));
    else if (mode == ScalarMode::kRational && v.is_number_integer())
      values.push_back(Scalar(Rational(v.get<long long>())));
    else if (mode == ScalarMode::kRational)
      values.push_back(Scalar(parse_rational(v.dump())));
    else
      values.push_back(Scalar(Real(v.dump())));
  }
  return from_values(std::move(values), mode, bits, j.value("name", "literal"));
}

nlohmann::json PositiveSequence::to_json(std::size_t up_to) const {
  nlohmann::json j;
  j["mode"] = mode_ == ScalarMode::kRational ? "rational" : "float";
  j["precision_bits"] = precision_bits_;
  j["name"] = name_;
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t n = 0; n <= up_to; ++n) vals.push_back(at(n).to_string());
  j["values"] = std::move(vals);
  return j;
}

}  // namespace momentdet
