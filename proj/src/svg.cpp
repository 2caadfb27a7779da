#include "ringmap/svg.hpp"

#include <cstdio>
#include <sstream>

#include "ringmap/errors.hpp"
#include "ringmap/validators.hpp"

namespace ringmap {

namespace {

using Curve = std::vector<Complex>;

std::vector<Curve> parameter_curves(const RingDomain& d, int resolution, int curves) {
    std::vector<Curve> out;
    if (auto a = d.as<Annulus>()) {
        for (int i = 1; i < curves; ++i) {
            double r = a->r * std::pow(a->R / a->r, double(i) / curves);
            Curve c;
            for (int k = 0; k <= resolution; ++k) c.push_back(a->center + std::polar(r, 2.0 * kPi * k / resolution));
            out.push_back(c);
        }
        for (int i = 0; i < 2 * curves; ++i) {
            Curve c;
            double th = 2.0 * kPi * i / (2 * curves);
            for (int k = 1; k < resolution; ++k) {
                double r = a->r * std::pow(a->R / a->r, double(k) / resolution);
                c.push_back(a->center + std::polar(r, th));
            }
            out.push_back(c);
        }
        return out;
    }
    Box b = sampling_region(d);
    for (int i = 0; i <= curves; ++i) {
        double y = b.y0 + (b.y1 - b.y0) * (i + 0.5) / (curves + 1);
        double x = b.x0 + (b.x1 - b.x0) * (i + 0.5) / (curves + 1);
        Curve h, v;
        for (int k = 0; k <= resolution; ++k) {
            h.push_back({b.x0 + (b.x1 - b.x0) * k / resolution, y});
            v.push_back({x, b.y0 + (b.y1 - b.y0) * k / resolution});
        }
        out.push_back(h);
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string render_grid_svg(const HarmonicMapSpec& spec, int resolution, int curves) {
    if (resolution < 2 || curves < 1) throw ValidationError("render", "resolution and curve count too small");
    std::vector<Curve> pieces;
    int gaps = 0;
    Box box;
    for (const Curve& c : parameter_curves(spec.source, resolution, curves)) {
        Curve cur;
        for (Complex z : c) {
            Complex w;
            bool ok = domain_contains(spec.source, z);
            if (ok) {
                try {
                    w = evaluate_map(spec, z, false);
                    ok = std::isfinite(w.real()) && std::isfinite(w.imag());
                } catch (const RingError&) {
                    ok = false;
                }
            }
            if (!ok) {
                ++gaps;
                if (cur.size() > 1) pieces.push_back(cur);
                cur.clear();
                continue;
            }
            cur.push_back(w);
            box.add(w);
        }
        if (cur.size() > 1) pieces.push_back(cur);
    }
    if (box.empty()) box = {-1, -1, 1, 1};
    double w = std::max(box.x1 - box.x0, 1e-12), h = std::max(box.y1 - box.y0, 1e-12);
    double pad = 0.05 * std::max(w, h);
    const double size = 800.0;
    double scale = size / (std::max(w, h) + 2 * pad);
    auto px = [&](Complex z) {
        return std::pair{(z.real() - box.x0 + pad) * scale, (box.y1 + pad - z.imag()) * scale};
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << (w + 2 * pad) * scale
       << "\" height=\"" << (h + 2 * pad) * scale << "\">\n"
       << "<!-- " << gaps << " grid points outside the domain or not evaluable -->\n"
       << "<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1\">\n";
    char buf[64];
    for (const Curve& c : pieces) {
        os << "<polyline points=\"";
        for (Complex z : c) {
            auto [x, y] = px(z);
            std::snprintf(buf, sizeof buf, "%.3f,%.3f ", x, y);
            os << buf;
        }
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace ringmap
