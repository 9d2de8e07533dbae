#include "secrecy/channel_io.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace secrecy {

namespace {

using nlohmann::json;

cplx entry(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("channels: entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

bool is_pair(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number(); }

bool is_flat(const json& j) { return j.is_array() && !j.empty() && is_pair(j[0]); }

ComplexMatrix nested(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  if (cols == 0) throw std::invalid_argument("channels: empty matrix row");
  ComplexMatrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("channels: ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = entry(row[static_cast<std::size_t>(c)]);
  }
  return a;
}

ComplexMatrix flat(const json& j, Eigen::Index rows) {
  const auto total = static_cast<Eigen::Index>(j.size());
  if (rows <= 0 || total % rows != 0) throw std::invalid_argument("channels: flat matrix length does not match N");
  const Eigen::Index cols = total / rows;
  ComplexMatrix a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = entry(j[static_cast<std::size_t>(r * cols + c)]);
  }
  return a;
}

json dump(const ComplexMatrix& a) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

bool ChannelFile::multi_antenna() const {
  for (const auto& e : eavesdroppers) {
    if (e.cols() > 1) return true;
  }
  return false;
}

SecrecyProblem ChannelFile::problem() const {
  return problem(multi_antenna() ? AntennaMode::MultiAntenna : AntennaMode::SingleAntenna);
}

SecrecyProblem ChannelFile::problem(AntennaMode mode) const {
  if (mode == AntennaMode::MultiAntenna) return SecrecyProblem::multi_antenna(hs, eavesdroppers, power, sigma2);
  std::vector<ComplexVector> eav;
  std::vector<double> noise;
  for (std::size_t i = 0; i < eavesdroppers.size(); ++i) {
    if (eavesdroppers[i].cols() != 1) throw std::invalid_argument("channels: single-antenna mode needs N x 1 eavesdroppers");
    eav.push_back(eavesdroppers[i].col(0));
    noise.push_back(sigma2[i](0));
  }
  return SecrecyProblem::single_antenna(hs, eav, noise, power);
}

ChannelFile parse_channels(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("channels: ") + e.what());
  }
  for (const char* key : {"Hs", "eavesdroppers", "P"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("channels: missing field ") + key);
  }
  ChannelFile out;
  if (!j["P"].is_number()) throw std::invalid_argument("channels: P must be a number");
  out.power = j["P"].get<double>();

  const json& eav = j["eavesdroppers"];
  if (!eav.is_array()) throw std::invalid_argument("channels: eavesdroppers must be a list");
  Eigen::Index n = j.contains("N") ? j["N"].get<Eigen::Index>() : -1;
  for (const auto& e : eav) {
    if (is_flat(e)) {
      if (n < 0) n = static_cast<Eigen::Index>(e.size());
      out.eavesdroppers.push_back(flat(e, n));
    } else if (e.is_array() && !e.empty()) {
      out.eavesdroppers.push_back(nested(e));
      if (n < 0) n = out.eavesdroppers.back().rows();
    } else {
      throw std::invalid_argument("channels: malformed eavesdropper matrix");
    }
  }
  const json& hs = j["Hs"];
  if (is_flat(hs)) {
    out.hs = flat(hs, n);
  } else if (hs.is_array() && !hs.empty()) {
    out.hs = nested(hs);
  } else {
    throw std::invalid_argument("channels: malformed Hs");
  }

  if (j.contains("sigma2")) {
    const json& s = j["sigma2"];
    if (!s.is_array() || s.size() != out.eavesdroppers.size()) {
      throw std::invalid_argument("channels: sigma2 needs one entry per eavesdropper");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Eigen::Index ne = out.eavesdroppers[i].cols();
      if (s[i].is_number()) {
        out.sigma2.push_back(RealVector::Constant(ne, s[i].get<double>()));
      } else if (s[i].is_array() && static_cast<Eigen::Index>(s[i].size()) == ne) {
        RealVector v(ne);
        for (Eigen::Index a = 0; a < ne; ++a) v(a) = s[i][static_cast<std::size_t>(a)].get<double>();
        out.sigma2.push_back(v);
      } else {
        throw std::invalid_argument("channels: sigma2 entry does not match the eavesdropper antennas");
      }
    }
  } else {
    for (const auto& e : out.eavesdroppers) out.sigma2.push_back(RealVector::Ones(e.cols()));
  }
  if (j.contains("Gamma")) {
    const json& g = j["Gamma"];
    if (!g.is_array() || g.size() != out.eavesdroppers.size()) {
      throw std::invalid_argument("channels: Gamma needs one entry per eavesdropper");
    }
    RealVector v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      // null means no limit
      v(static_cast<Eigen::Index>(i)) = g[i].is_null() ? std::numeric_limits<double>::infinity() : g[i].get<double>();
    }
    out.gamma = v;
  }
  out.problem();  // validates shapes and values
  return out;
}

ChannelFile read_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("channels: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_channels(buf.str());
}

std::string format_channels(const ChannelFile& file) {
  json j;
  j["Hs"] = dump(file.hs);
  j["eavesdroppers"] = json::array();
  for (const auto& e : file.eavesdroppers) j["eavesdroppers"].push_back(dump(e));
  j["sigma2"] = json::array();
  for (const auto& s : file.sigma2) j["sigma2"].push_back(std::vector<double>(s.data(), s.data() + s.size()));
  j["P"] = file.power;
  if (file.gamma) {
    json g = json::array();
    for (Eigen::Index i = 0; i < file.gamma->size(); ++i) {
      const double v = (*file.gamma)(i);
      if (std::isfinite(v)) {
        g.push_back(v);
      } else {
        g.push_back(nullptr);
      }
    }
    j["Gamma"] = g;
  }
  return j.dump(2);
}

}  // namespace secrecy
