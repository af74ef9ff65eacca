#include "nsad/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace nsad {

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite value cannot be made rational");
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp); // x = m * 2^exp, |m| in [0.5, 1)
    // 53 bits of mantissa make m * 2^53 integral.
    Int num = Int(static_cast<long long>(std::ldexp(m, 53)));
    exp -= 53;
    Rat r(num);
    if (exp >= 0) {
        r *= Rat(Int(1) << exp);
    } else {
        r /= Rat(Int(1) << (-exp));
    }
    return r;
}

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Int num(s.substr(0, slash));
            Int den(s.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + s + "'");
            return Rat(num, den);
        }
        if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
            s.find('E') != std::string::npos) {
            size_t pos = 0;
            double d = std::stod(s, &pos);
            if (pos != s.size()) throw ParseError("trailing junk in '" + s + "'");
            return rat_from_double(d);
        }
        return Rat(Int(s));
    } catch (const std::exception& e) {
        throw ParseError("bad rational literal '" + s + "': " + e.what());
    }
}

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

} // namespace nsad
