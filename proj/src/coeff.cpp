#include "prolongate/coeff.hpp"

#include <stdexcept>

namespace prolong {

Coeff Coeff::inverse() const {
    mpq_class n = re * re + im * im;
    if (sgn(n) == 0) throw std::domain_error("division by zero coefficient");
    return Coeff(re / n, -im / n);
}

std::string Coeff::str() const {
    if (is_real()) return re.get_str();
    if (sgn(re) == 0) {
        if (im == 1) return "i";
        if (im == -1) return "-i";
        return im.get_str() + "*i";
    }
    std::string s = "(" + re.get_str();
    s += sgn(im) < 0 ? " - " : " + ";
    mpq_class a = abs(im);
    s += (a == 1 ? std::string("i") : a.get_str() + "*i") + ")";
    return s;
}

}  // namespace prolong
