#ifndef CONFLUENT_MULTIPRECISION_HPP
#define CONFLUENT_MULTIPRECISION_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace confluent {

// 50 decimal digits; expression templates off so that auto and lambdas behave.
using real50 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                             boost::multiprecision::et_off>;

}  // namespace confluent

#endif
