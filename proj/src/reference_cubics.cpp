#include "hyperjac/identities.hpp"

namespace hyperjac {

// Transcribed as printed; line breaks inside a side read as "+".
const std::vector<ReferenceCubic>& reference_cubics() {
  static const std::vector<ReferenceCubic> cubics = {
      {3, "000",
       "000 101 101 + 011 101 110 = 010 101 111 + 001 100 101"},
      {4, "0000",
       "0000 1001 1001 + 0000 1010 1010 + 0000 1011 1011 + 0000 1101 1101 + "
       "0011 1101 1110 + 0101 1000 1101 + 0101 1011 1110 + 0110 1010 1100 + "
       "0111 1001 1110 + 0111 1011 1100 = 0001 1000 1001 + 0001 1100 1101 + "
       "0010 1000 1010 + 0010 1101 1111 + 0011 1000 1011 + 0100 1010 1110 + "
       "0100 1011 1111 + 0101 1001 1100 + 0101 1010 1111 + 0110 1001 1111"},
      {4, "0001",
       "0000 1000 1001 + 0000 1100 1101 + 0010 1001 1010 + 0011 1001 1011 + "
       "0011 1100 1110 + 0100 1000 1101 + 0100 1011 1110 + 0101 1010 1110 + "
       "0101 1011 1111 + 0111 1000 1110 = 0001 1000 1000 + 0001 1010 1010 + "
       "0001 1011 1011 + 0001 1100 1100 + 0010 1100 1111 + 0100 1001 1100 + "
       "0100 1010 1111 + 0110 1000 1111 + 0110 1010 1101 + 0111 1011 1101"},
  };
  return cubics;
}

}  // namespace hyperjac
