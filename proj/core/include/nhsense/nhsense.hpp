#pragma once

#include "nhsense/closedform.hpp"
#include "nhsense/dynamics.hpp"
#include "nhsense/errors.hpp"
#include "nhsense/metrics.hpp"
#include "nhsense/model.hpp"
#include "nhsense/optimize.hpp"
#include "nhsense/oracle.hpp"
