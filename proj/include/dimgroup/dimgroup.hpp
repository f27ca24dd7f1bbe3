#pragma once

#include "dimgroup/cone.hpp"
#include "dimgroup/element.hpp"
#include "dimgroup/error.hpp"
#include "dimgroup/oracle.hpp"
#include "dimgroup/poset.hpp"
#include "dimgroup/riesz.hpp"
