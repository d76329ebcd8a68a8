#include "tvps/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tvps {

std::size_t ArrivalStream::count_until(double t) const {
  return static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), t) - times.begin());
}

ArrivalStream generate(const DistributionSpec& base, const CumulativeRate& lambda, double horizon,
                       RandomStream& rng, FirstArrival first) {
  if (!(horizon > 0.0)) throw std::invalid_argument("arrival horizon must be positive");
  ArrivalStream stream;
  stream.horizon = horizon;

  const double scale = 1.0 / base.mean();
  const double x0 = base.sample_equilibrium(rng) * scale;
  double t = first == FirstArrival::Inverted ? lambda.inverse(x0, 0.0) : x0;
  while (t <= horizon) {
    stream.times.push_back(t);
    double next = lambda.inverse(base.sample(rng) * scale, t);
    // Keep the sequence strictly increasing even for draws below the
    // resolution of t.
    if (!(next > t)) next = std::nextafter(t, horizon + 1.0);
    t = next;
  }
  return stream;
}

ArrivalStream attach_sizes(ArrivalStream stream, const DistributionSpec& jobsize, RandomStream& rng) {
  stream.sizes.resize(stream.times.size());
  for (double& s : stream.sizes) s = jobsize.sample(rng);
  return stream;
}

void write_csv(std::ostream& out, const ArrivalStream& stream) {
  out << "time,size\n";
  char buf[64];
  for (std::size_t i = 0; i < stream.times.size(); ++i) {
    const double size = i < stream.sizes.size() ? stream.sizes[i] : 0.0;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", stream.times[i], size);
    out << buf;
  }
}

ArrivalStream read_csv(std::istream& in, double horizon) {
  ArrivalStream stream;
  stream.horizon = horizon;
  std::string line;
  if (!std::getline(in, line) || line.rfind("time,size", 0) != 0)
    throw std::runtime_error("arrival trace: missing 'time,size' header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("arrival trace: malformed line '" + line + "'");
    stream.times.push_back(std::stod(line.substr(0, comma)));
    stream.sizes.push_back(std::stod(line.substr(comma + 1)));
  }
  return stream;
}

}  // namespace tvps
