#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace simbench::svg {

/// Minimal append-only SVG builder. Coordinates are printed with two decimals
/// so identical input gives byte-identical documents.
class Document {
 public:
  Document(double width, double height);

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            std::string_view css_class = {}, std::string_view dash = {});
  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke,
            std::string_view css_class = {});
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view css_class = {});
  void path(std::string_view d, std::string_view stroke, double width, std::string_view dash,
            std::string_view css_class = {}, std::string_view data_method = {});
  void text(double x, double y, std::string_view content, double size = 11.0, std::string_view anchor = "start",
            double rotate = 0.0);
  void begin_group(std::string_view css_class, std::string_view title = {});
  void end_group();

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

std::string escape(std::string_view text);
std::string num(double v);

/// Roughly `count` evenly spaced round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int count = 5);

}  // namespace simbench::svg
