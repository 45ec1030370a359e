#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <fitcert/fitcert.hpp>

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(FITCERT_FIXTURES) + "/" + name; }

inline std::string read(const std::string& name) {
    std::ifstream in(path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline fitcert::ObservationPattern mask(const std::string& name, std::size_t r) {
    return fitcert::parse_pattern(read(name + ".mask"), r);
}

// d=5, r=2
inline fitcert::ObservationPattern circuit5() { return mask("circuit5", 2); }
// d=3, r=1, two columns
inline fitcert::ObservationPattern two_lines() { return mask("two_lines", 1); }
// d=3, r=1, three columns
inline fitcert::ObservationPattern triangle() { return mask("triangle", 1); }
// d=6, r=2, four columns
inline fitcert::ObservationPattern crowded() { return mask("crowded", 2); }
// d=6, r=2, six columns
inline fitcert::ObservationPattern six_bases() { return mask("six_bases", 2); }
// d=5, r=2, three columns
inline fitcert::ObservationPattern independent3() { return mask("independent3", 2); }

// r=1 cycle 1-2-3-4-1 plus the chord {1,3}.
inline fitcert::ObservationPattern cycle_with_chord() {
    return fitcert::ObservationPattern::from_lists(4, 1, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 3}});
}

}  // namespace fixtures
