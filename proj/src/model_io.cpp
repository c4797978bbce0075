#include "pdmp/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pdmp/error.hpp"

namespace pdmp {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "pdmp-model";

json vec_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from_json(const json& j, Eigen::Index expected = -1) {
  const auto values = j.get<std::vector<double>>();
  if (expected >= 0 && static_cast<Eigen::Index>(values.size()) != expected) {
    throw ParseError("array has " + std::to_string(values.size()) +
                     " entries, expected " + std::to_string(expected));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vec_to_json(m.row(r).transpose()));
  }
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    m.row(static_cast<Eigen::Index>(r)) = vec_from_json(j[r], cols).transpose();
  }
  return m;
}

json quat_to_json(const UnitQuaternion& q) { return vec_to_json(q.coeffs()); }

UnitQuaternion quat_from_json(const json& j) {
  const Eigen::VectorXd c = vec_from_json(j, 4);
  return UnitQuaternion::from_unit(c[0], c[1], c[2], c[3], 1e-9);
}

json basis_to_json(const KernelBasis& b) {
  return {{"kernels", b.size()}, {"width", b.width},
          {"centers", vec_to_json(b.centers)}};
}

KernelBasis basis_from_json(const json& j) {
  KernelBasis b;
  b.width = j.at("width").get<double>();
  b.centers = vec_from_json(j.at("centers"), j.at("kernels").get<int>());
  return b;
}

json periodic_to_json(const PeriodicDmpModel& m) {
  return {{"basis", basis_to_json(m.basis)},
          {"alpha_z", m.alpha_z},
          {"beta_z", m.beta_z},
          {"omega", m.omega},
          {"goal", vec_to_json(m.goal)},
          {"amplitude", vec_to_json(m.amplitude)},
          {"weights", mat_to_json(m.weights)}};
}

PeriodicDmpModel periodic_from_json(const json& j) {
  PeriodicDmpModel m;
  m.basis = basis_from_json(j.at("basis"));
  m.alpha_z = j.at("alpha_z").get<double>();
  m.beta_z = j.at("beta_z").get<double>();
  m.omega = j.at("omega").get<double>();
  m.goal = vec_from_json(j.at("goal"));
  m.amplitude = vec_from_json(j.at("amplitude"), m.goal.size());
  m.weights = mat_from_json(j.at("weights"), m.basis.size());
  m.validate();
  return m;
}

json qp_to_json(const qp::QpDmpModel& m) {
  return {{"basis", basis_to_json(m.basis)},
          {"alpha_z", m.alpha_z},
          {"beta_z", m.beta_z},
          {"goal", quat_to_json(m.goal)},
          {"omega", vec_to_json(m.omega)},
          {"phase_frequency", m.phase_frequency},
          {"amplitude", vec_to_json(m.amplitude)},
          {"weights", mat_to_json(m.weights)}};
}

qp::QpDmpModel qp_from_json(const json& j) {
  qp::QpDmpModel m;
  m.basis = basis_from_json(j.at("basis"));
  m.alpha_z = j.at("alpha_z").get<double>();
  m.beta_z = j.at("beta_z").get<double>();
  m.goal = quat_from_json(j.at("goal"));
  m.omega = vec_from_json(j.at("omega"), 3);
  m.phase_frequency = j.at("phase_frequency").get<double>();
  m.amplitude = vec_from_json(j.at("amplitude"), 3);
  m.weights = mat_from_json(j.at("weights"), m.basis.size());
  return m;
}

struct Encoder {
  json operator()(const PeriodicDmpModel& m) const {
    return {{"kind", "periodic"}, {"dmp", periodic_to_json(m)}};
  }
  json operator()(const rmp::RmpDmpModel& m) const {
    return {{"kind", "rmp"},
            {"center", quat_to_json(m.center)},
            {"dmp", periodic_to_json(m.inner)},
            {"initial",
             {{"y", vec_to_json(m.initial.y)},
              {"z", vec_to_json(m.initial.z)},
              {"phi", m.initial.phi}}}};
  }
  json operator()(const qp::QpDmpModel& m) const {
    return {{"kind", "qp"},
            {"qp", qp_to_json(m)},
            {"initial",
             {{"q", quat_to_json(m.initial.q)},
              {"eta", vec_to_json(m.initial.eta)},
              {"phi", m.initial.phi}}}};
  }
};

}  // namespace

std::string dump_model(const AnyModel& model) {
  json doc = std::visit(Encoder{}, model);
  doc["format"] = kFormatName;
  doc["version"] = kModelFormatVersion;
  return doc.dump(2) + "\n";
}

AnyModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document is not valid JSON: ") +
                     e.what());
  }
  try {
    if (doc.value("format", "") != kFormatName) {
      throw ParseError("not a pdmp model document");
    }
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw ParseError("unsupported model version " +
                       doc.at("version").dump());
    }
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "periodic") return periodic_from_json(doc.at("dmp"));
    if (kind == "rmp") {
      rmp::RmpDmpModel m;
      m.inner = periodic_from_json(doc.at("dmp"));
      m.center = quat_from_json(doc.at("center"));
      const json& init = doc.at("initial");
      m.initial.y = vec_from_json(init.at("y"), 3);
      m.initial.z = vec_from_json(init.at("z"), 3);
      m.initial.phi = init.at("phi").get<double>();
      m.validate();
      return m;
    }
    if (kind == "qp") {
      qp::QpDmpModel m = qp_from_json(doc.at("qp"));
      const json& init = doc.at("initial");
      m.initial.q = quat_from_json(init.at("q"));
      m.initial.eta = vec_from_json(init.at("eta"), 3);
      m.initial.phi = init.at("phi").get<double>();
      m.validate();
      return m;
    }
    throw ParseError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const AnyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << dump_model(model);
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace pdmp
