#pragma once

#include "eqnf/types.hpp"
#include "eqnf/linalg.hpp"
#include "eqnf/group.hpp"
#include "eqnf/monomials.hpp"
#include "eqnf/polymap.hpp"
#include "eqnf/hk_operators.hpp"
#include "eqnf/subspace.hpp"
#include "eqnf/normalform.hpp"
#include "eqnf/family.hpp"
#include "eqnf/reduction.hpp"
#include "eqnf/problem.hpp"
#include "eqnf/commands.hpp"
