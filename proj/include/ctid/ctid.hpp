#pragma once

#include "ctid/error.hpp"
#include "ctid/scalar.hpp"
#include "ctid/linform.hpp"
#include "ctid/ct.hpp"
#include "ctid/oracle.hpp"
#include "ctid/parse.hpp"
#include "ctid/verify.hpp"
