#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ruled/aut_atlas.hpp"

namespace ruled::cli {

using nlohmann::json;

/// Input parsers. Failures raise ParseError with the column and a caret line;
/// `what` names the argument in the message.
Curve parse_curve(std::string_view text, const std::string& what = "curve");
Point parse_point(const Curve& E, std::string_view text, const std::string& what = "point");
/// T | D(<d>; s=(x,y)) | A0 | A1 | F<n>. The curve may be null only for F<n>.
SurfaceDescriptor parse_descriptor(const Curve* E, std::string_view text, const std::string& what = "descriptor");
/// z=(x,y); loc=min|comp|q|generic|coords [u:v]
ElmPoint parse_elm_center(const Curve& E, std::string_view text, const std::string& what = "center");
/// Integer coefficients, ^ for powers and at most one / for the fraction bar.
RatFunc parse_ratfunc(std::uint64_t p, std::string_view text, const std::string& what = "rational function");
/// Rational expression in x and y, reduced modulo the curve equation.
CurveFunction parse_curve_function(const Curve& E, std::string_view text, const std::string& what = "function");
/// [u : v] with u, v curve functions.
BundleSection parse_section(const Curve& E, std::string_view text, const std::string& what = "section");

json to_json(const Curve& E);
json to_json(const Point& P);
json to_json(const DivisorClass& c);
json to_json(const SurfaceDescriptor& d);
json to_json(const BundleModel& m);
json to_json(const ChainCertificate& c);
json to_json(const ElmResult& r);
json to_json(const AutDescription& a);

Curve curve_from_json(const json& j);
Point point_from_json(const Curve& E, const json& j);
DivisorClass class_from_json(const Curve& E, const json& j);
SurfaceDescriptor descriptor_from_json(const json& j);
BundleModel model_from_json(const json& j);
ChainCertificate certificate_from_json(const json& j);

/// Argument vector without the program name; returns the exit code.
/// 0 determinate, 1 Undetermined or PartiallyKnown, 2 input error.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruled::cli
