#include "json_io.hpp"

#include <sstream>

namespace resurge::cli {

Json series_to_json(const FormalSeries& s)
{
    Json j;
    j["variable"] = to_string(s.variable());
    j["min_order"] = s.min_order();
    j["truncation_order"] = s.truncation_order();
    j["mode"] = s.mode() == Mode::exact ? "exact" : "float";
    j["precision_bits"] = s.precision_bits();
    j["gevrey"] = s.gevrey();
    Json c = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i)
        c.push_back(s.mode() == Mode::exact ? to_string(s.exact()[i]) : to_string(s.floating()[i]));
    j["coeffs"] = std::move(c);
    return j;
}

FormalSeries series_from_json(const Json& j)
{
    std::ostringstream t;
    t << "variable=" << j.at("variable").get<std::string>() << " min_order=" << j.at("min_order").get<int>()
      << " truncation_order=" << j.at("truncation_order").get<int>() << " mode=" << j.at("mode").get<std::string>()
      << " precision_bits=" << j.at("precision_bits").get<unsigned>()
      << " gevrey=" << (j.at("gevrey").get<bool>() ? 1 : 0) << " coeffs=[";
    bool first = true;
    for (const auto& c : j.at("coeffs")) {
        t << (first ? "" : ", ") << c.get<std::string>();
        first = false;
    }
    t << "]";
    return FormalSeries::from_text(t.str());
}

Json complex_to_json(const CF& z, int digits10)
{
    Json j;
    j["re"] = to_string(z.re, digits10);
    j["im"] = to_string(z.im, digits10);
    return j;
}

Json exact_to_json(const CQ& z)
{
    Json j;
    j["re"] = to_string(z.re);
    j["im"] = to_string(z.im);
    return j;
}

Json sympoly_to_json(const SymPoly& p) { return p.to_string(); }

std::string series_to_csv(const FormalSeries& s, const std::string& label)
{
    std::ostringstream out;
    for (int k = s.min_order(); k <= s.truncation_order() && s.size() > 0; ++k) {
        if (k - s.min_order() >= static_cast<int>(s.size()))
            break;
        if (!label.empty())
            out << label << ',';
        out << k << ',';
        if (s.mode() == Mode::exact) {
            CQ c = s.coeff_exact(k);
            out << to_string(c.re) << ',' << to_string(c.im);
        } else {
            CF c = s.coeff_cf(k);
            out << to_string(c.re) << ',' << to_string(c.im);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace resurge::cli
