#include "qrlab/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qrlab/errors.hpp"

namespace qrlab {

namespace {

using nlohmann::json;

json header_of(const GridFunction& f) {
  return json{{"dim", f.spec().dim},
              {"n", f.spec().n},
              {"half_width", f.spec().half_width},
              {"domain_tag", to_string(f.domain())}};
}

std::pair<GridSpec, Domain> parse_header(const std::string& text) {
  json h;
  try {
    h = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("grid header: ") + e.what());
  }
  for (const char* key : {"dim", "n", "half_width", "domain_tag"})
    if (!h.contains(key)) throw SchemaError(std::string("grid header: missing ") + key);
  const GridSpec spec = make_grid(h["dim"].get<int>(), h["n"].get<int>(),
                                  h["half_width"].get<double>());
  return {spec, domain_from_string(h["domain_tag"].get<std::string>())};
}

bool is_csv(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

void write_csv(std::ostream& out, const GridFunction& f) {
  const GridSpec& spec = f.spec();
  out << "# " << header_of(f).dump() << "\n";
  for (int d = 0; d < spec.dim; ++d) out << "i" << d << ",";
  out << "re,im\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = spec.unflatten(i);
    for (int d = 0; d < spec.dim; ++d) out << idx[d] << ",";
    out << f[i].real() << "," << f[i].imag() << "\n";
  }
}

GridFunction read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw SchemaError("grid csv: missing JSON header line");
  const auto [spec, domain] = parse_header(line.substr(2));
  std::getline(in, line);
  GridFunction f(spec, domain);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < spec.dim; ++d) {
      std::getline(ss, cell, ',');
      idx[d] = std::stoi(cell);
      if (idx[d] < 0 || idx[d] >= spec.n) throw SchemaError("grid csv: index out of range");
    }
    double re = 0.0, im = 0.0;
    std::getline(ss, cell, ',');
    re = std::stod(cell);
    std::getline(ss, cell, ',');
    im = std::stod(cell);
    f[spec.flatten(idx)] = cplx(re, im);
    ++rows;
  }
  if (rows != spec.size()) throw SchemaError("grid csv: row count does not match n^dim");
  return f;
}

void write_binary(std::ostream& out, const GridFunction& f) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  const std::string header = header_of(f).dump();
  const std::uint64_t len = header.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(f.data().data()),
            static_cast<std::streamsize>(f.size() * sizeof(cplx)));
}

GridFunction read_binary(std::istream& in) {
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || len > (1u << 20)) throw SchemaError("grid binary: bad header length");
  std::string header(len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(len));
  const auto [spec, domain] = parse_header(header);
  GridFunction f(spec, domain);
  in.read(reinterpret_cast<char*>(f.data().data()),
          static_cast<std::streamsize>(f.size() * sizeof(cplx)));
  if (!in) throw SchemaError("grid binary: truncated payload");
  return f;
}

void save(const std::string& path, const GridFunction& f) {
  std::ofstream out(path, is_csv(path) ? std::ios::out : std::ios::binary);
  if (!out) throw ParameterError("cannot open " + path + " for writing");
  if (is_csv(path))
    write_csv(out, f);
  else
    write_binary(out, f);
}

GridFunction load(const std::string& path) {
  std::ifstream in(path, is_csv(path) ? std::ios::in : std::ios::binary);
  if (!in) throw ParameterError("cannot open " + path);
  return is_csv(path) ? read_csv(in) : read_binary(in);
}

}  // namespace qrlab
