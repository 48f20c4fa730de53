#pragma once

#include "lauricella/error.hpp"
#include "lauricella/rational.hpp"
#include "lauricella/var_table.hpp"
#include "lauricella/polynomial.hpp"
#include "lauricella/rational_function.hpp"
#include "lauricella/expression.hpp"
#include "lauricella/substitution.hpp"
#include "lauricella/pde_system.hpp"
#include "lauricella/systems.hpp"
#include "lauricella/integrability.hpp"
#include "lauricella/transform.hpp"
#include "lauricella/covering.hpp"
#include "lauricella/pushforward.hpp"
#include "lauricella/fdseries.hpp"
