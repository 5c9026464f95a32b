#include <iostream>

#include "ponconf/celestial.hpp"
#include "ponconf/exact/oracle.hpp"
#include "ponconf/version.hpp"

int main() {
    auto p = ponconf::poncelet_polygon(ponconf::ConfocalFamily::from_semi_axes(2, 1), 7, 1, 0.37);
    auto s = ponconf::construct(ponconf::parse_symbol("7#(3,1;2,3;1,2)"), p);
    auto r = ponconf::exact::lemma1_sweep(5, 1);
    std::cout << ponconf::version() << " " << s.audit.points << " " << r.verdict() << "\n";
    return s.audit.points == 21 && r.pass ? 0 : 1;
}
