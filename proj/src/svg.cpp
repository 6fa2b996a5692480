#include "simbench/svg.hpp"

#include <cmath>
#include <cstdio>

namespace simbench::svg {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
                    std::string_view css_class, std::string_view dash) {
  body_ += "<line";
  if (!css_class.empty()) body_ += " class=\"" + escape(css_class) + "\"";
  body_ += " x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + escape(stroke) + "\" stroke-width=\"" + num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + escape(dash) + "\"";
  body_ += "/>\n";
}

void Document::rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke,
                    std::string_view css_class) {
  body_ += "<rect";
  if (!css_class.empty()) body_ += " class=\"" + escape(css_class) + "\"";
  body_ += " x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" fill=\"" + escape(fill) + "\" stroke=\"" + escape(stroke) + "\"/>\n";
}

void Document::circle(double cx, double cy, double r, std::string_view fill, std::string_view css_class) {
  body_ += "<circle";
  if (!css_class.empty()) body_ += " class=\"" + escape(css_class) + "\"";
  body_ += " cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + escape(fill) + "\"/>\n";
}

void Document::path(std::string_view d, std::string_view stroke, double width, std::string_view dash,
                    std::string_view css_class, std::string_view data_method) {
  body_ += "<path";
  if (!css_class.empty()) body_ += " class=\"" + escape(css_class) + "\"";
  if (!data_method.empty()) body_ += " data-method=\"" + escape(data_method) + "\"";
  body_ += " d=\"" + std::string(d) + "\" fill=\"none\" stroke=\"" + escape(stroke) + "\" stroke-width=\"" +
           num(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + escape(dash) + "\"";
  body_ += "/>\n";
}

void Document::text(double x, double y, std::string_view content, double size, std::string_view anchor,
                    double rotate) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) + "\" text-anchor=\"" +
           escape(anchor) + "\"";
  if (rotate != 0.0) body_ += " transform=\"rotate(" + num(rotate) + " " + num(x) + " " + num(y) + ")\"";
  body_ += ">" + escape(content) + "</text>\n";
}

void Document::begin_group(std::string_view css_class, std::string_view title) {
  body_ += "<g class=\"" + escape(css_class) + "\">\n";
  if (!title.empty()) body_ += "<title>" + escape(title) + "</title>\n";
}

void Document::end_group() { body_ += "</g>\n"; }

std::string Document::str() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width_) + "\" height=\"" +
         num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
         "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(width_) + "\" height=\"" + num(height_) + "\" fill=\"white\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int count) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, count);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return ticks;
}

}  // namespace simbench::svg
