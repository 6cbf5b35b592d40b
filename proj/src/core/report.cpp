#include "seeds3d/report.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace seeds3d {
namespace {

using json = nlohmann::ordered_json;

json dims_json(const Dims& d) { return json::array({d[0], d[1], d[2]}); }

std::string class_name(const std::map<int, std::string>& names, int id) {
  const auto it = names.find(id);
  return it == names.end() ? "class_" + std::to_string(id) : it->second;
}

}  // namespace

std::string run_report_json(const RunReport& report, const SeedsParams& params, const Dims& dims) {
  json passes = json::array();
  for (const auto& p : report.passes)
    passes.push_back({{"kind", to_string(p.kind)},
                      {"level", p.level},
                      {"proposed", p.proposed},
                      {"accepted", p.accepted},
                      {"seconds", p.seconds}});
  json doc = {
      {"schema", kRunReportSchema},
      {"dims", dims_json(dims)},
      {"params",
       {{"num_supervoxels", params.num_supervoxels},
        {"num_bins", params.num_bins},
        {"prior_weight", params.prior_weight},
        {"block_iterations", params.block_iterations},
        {"pixel_iterations", params.pixel_iterations},
        {"mode", params.mode == Mode::TwoD ? "2d" : "3d"}}},
      {"supervoxels", report.supervoxels},
      {"init_seconds", report.init_seconds},
      {"total_seconds", report.total_seconds},
      {"moves_proposed", report.proposed()},
      {"moves_accepted", report.accepted()},
      {"passes", passes},
  };
  return doc.dump(2);
}

std::string metrics_json(const MetricsReport& report, const std::map<int, std::string>& class_names) {
  json classes = json::array();
  for (const auto& cd : report.ads) {
    json c = {{"class", cd.class_id}, {"name", class_name(class_names, cd.class_id)}, {"present", cd.dice.has_value()}};
    if (cd.dice) {
      c["dice"] = cd.dice->value();
      c["dice_numerator"] = cd.dice->numerator;
      c["dice_denominator"] = cd.dice->denominator;
    } else {
      c["dice"] = nullptr;
    }
    classes.push_back(std::move(c));
  }
  json doc = {
      {"schema", kMetricsSchema},
      {"dims", dims_json(report.dims)},
      {"supervoxels", report.supervoxels},
      {"classes", report.classes},
      {"ue", report.ue.value()},
      {"ue_numerator", report.ue.numerator},
      {"ue_denominator", report.ue.denominator},
      {"mean_ads", report.mean_ads ? json(*report.mean_ads) : json(nullptr)},
      {"ads", classes},
  };
  return doc.dump(2);
}

std::string metrics_csv(const MetricsReport& report, const std::map<int, std::string>& class_names) {
  std::ostringstream out;
  out << "class,name,dice,present\n" << std::setprecision(10);
  for (const auto& cd : report.ads) {
    out << cd.class_id << ',' << class_name(class_names, cd.class_id) << ',';
    if (cd.dice) out << cd.dice->value();
    out << ',' << (cd.dice ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace seeds3d
