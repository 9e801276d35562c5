#pragma once

#include "padic.hpp"
#include "poly.hpp"
#include "smith.hpp"
#include "weierstrass.hpp"
#include "resultant.hpp"
#include "bivar.hpp"
#include "text.hpp"
#include "primes.hpp"
#include "oracle.hpp"
#include "modules.hpp"
#include "json_io.hpp"
