#include "nil/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nil {

namespace {

constexpr int kGrid = 240;   // raster cells per axis
constexpr int kCell = 2;     // pixels per cell
constexpr int kMargin = 36;  // room for axis labels

struct Frame {
  double lo0, hi0, lo1, hi1;  // data ranges of the two common variables

  double px(double x) const {
    return kMargin + (x - lo0) / (hi0 - lo0) * (kGrid * kCell);
  }
  double py(double y) const {
    return kMargin + (hi1 - y) / (hi1 - lo1) * (kGrid * kCell);
  }
};

bool subset_of_common(const Formula& f, int c0, int c1) {
  std::vector<int> vs;
  collect_vars(f, vs);
  for (int v : vs)
    if (v != c0 && v != c1) return false;
  return true;
}

// One sign-sampled region as row-merged rectangles.
void raster_layer(std::ostringstream& os, const Formula& f, size_t nvars,
                  int c0, int c1, const Frame& fr, const char* color,
                  double opacity) {
  os << "<g fill=\"" << color << "\" fill-opacity=\"" << opacity << "\">\n";
  FPoint pt(nvars, 0.0);
  const double dx = (fr.hi0 - fr.lo0) / kGrid;
  const double dy = (fr.hi1 - fr.lo1) / kGrid;
  for (int row = 0; row < kGrid; ++row) {
    // row 0 is the top of the picture, i.e. the upper end of the y range
    double y = fr.hi1 - (row + 0.5) * dy;
    pt[c1] = y;
    int run = -1;
    for (int col = 0; col <= kGrid; ++col) {
      bool in = false;
      if (col < kGrid) {
        pt[c0] = fr.lo0 + (col + 0.5) * dx;
        try {
          in = eval_formula_float(f, pt);
        } catch (const DomainError&) {
          in = false;
        }
      }
      if (in && run < 0) run = col;
      if (!in && run >= 0) {
        os << "<rect x=\"" << kMargin + run * kCell << "\" y=\""
           << kMargin + row * kCell << "\" width=\"" << (col - run) * kCell
           << "\" height=\"" << kCell << "\"/>\n";
        run = -1;
      }
    }
  }
  os << "</g>\n";
}

void dot(std::ostringstream& os, const Frame& fr, const QPoint& p,
         const char* color) {
  double x = rat_to_double(p[0]), y = rat_to_double(p[1]);
  if (x < fr.lo0 || x > fr.hi0 || y < fr.lo1 || y > fr.hi1) return;
  os << "<circle cx=\"" << fr.px(x) << "\" cy=\"" << fr.py(y)
     << "\" r=\"2.2\" fill=\"" << color << "\"/>\n";
}

void ring(std::ostringstream& os, const Frame& fr, const QPoint& p) {
  double x = rat_to_double(p[0]), y = rat_to_double(p[1]);
  if (x < fr.lo0 || x > fr.hi0 || y < fr.lo1 || y > fr.hi1) return;
  os << "<circle cx=\"" << fr.px(x) << "\" cy=\"" << fr.py(y)
     << "\" r=\"4.5\" fill=\"none\" stroke=\"#222222\" "
        "stroke-width=\"1.2\"/>\n";
}

}  // namespace

std::string plot_svg(const Problem& prob, const NilResult& r) {
  if (prob.common.size() != 2)
    throw DimensionError("plotting needs exactly 2 common variables, got " +
                         std::to_string(prob.common.size()));
  const int c0 = prob.common[0], c1 = prob.common[1];
  Box box = r.cert_box;
  if (box.size() < prob.vars.size())
    box.resize(prob.vars.size(), Interval{-10.0, 10.0});
  Frame fr{box[c0].lo, box[c0].hi, box[c1].lo, box[c1].hi};
  if (!(fr.hi0 > fr.lo0) || !(fr.hi1 > fr.lo1))
    throw DimensionError("degenerate plot ranges");

  const int plot = kGrid * kCell;
  const int w = plot + 2 * kMargin, h = plot + 2 * kMargin;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
     << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"#ffffff\"/>\n";

  const size_t nv = prob.vars.size();
  if (prob.phi && subset_of_common(*prob.phi, c0, c1))
    raster_layer(os, *prob.phi, nv, c0, c1, fr, "#9e9e9e", 0.55);
  if (prob.psi && subset_of_common(*prob.psi, c0, c1))
    raster_layer(os, *prob.psi, nv, c0, c1, fr, "#4a7fd4", 0.45);
  if (r.interpolant)
    raster_layer(os, *r.interpolant, nv, c0, c1, fr, "#e87ba8", 0.45);

  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
     << plot << "\" height=\"" << plot
     << "\" fill=\"none\" stroke=\"#444444\"/>\n";

  for (const QPoint& p : r.pos) dot(os, fr, p, "#cc2222");
  for (const QPoint& p : r.neg) dot(os, fr, p, "#2244cc");
  const size_t npos = r.pos.size();
  for (size_t idx : r.support) {
    if (idx < npos)
      ring(os, fr, r.pos[idx]);
    else if (idx - npos < r.neg.size())
      ring(os, fr, r.neg[idx - npos]);
  }

  os << "<text x=\"" << kMargin + plot / 2 << "\" y=\"" << h - 8
     << "\" text-anchor=\"middle\" font-size=\"13\" "
        "font-family=\"sans-serif\">"
     << prob.vars[c0] << "</text>\n";
  os << "<text x=\"12\" y=\"" << kMargin + plot / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" "
        "font-family=\"sans-serif\" transform=\"rotate(-90 12 "
     << kMargin + plot / 2 << ")\">" << prob.vars[c1] << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_plot_svg(const Problem& prob, const NilResult& r,
                    const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << plot_svg(prob, r);
}

}  // namespace nil
