#include "pmk/rational.hpp"

#include <sstream>

namespace pmk {

Rat parse_rat(const std::string& s) {
    require(!s.empty(), "InvalidParams", "empty rational");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s));
        long long num = std::stoll(s.substr(0, slash));
        long long den = std::stoll(s.substr(slash + 1));
        require(den != 0, "InvalidParams", "zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        fail("InvalidParams", "cannot parse rational '" + s + "'");
    } catch (const std::out_of_range&) {
        fail("InvalidParams", "rational out of range '" + s + "'");
    }
}

std::string to_string(const Rat& r) {
    std::ostringstream os;
    if (r.denominator() == 1)
        os << r.numerator();
    else
        os << r.numerator() << '/' << r.denominator();
    return os.str();
}

} // namespace pmk
