#pragma once

#include "quint/config.hpp"
#include "quint/csv.hpp"
#include "quint/errors.hpp"
#include "quint/gauss_hermite.hpp"
#include "quint/interference.hpp"
#include "quint/mixtures.hpp"
#include "quint/monte_carlo.hpp"
#include "quint/neutron.hpp"
#include "quint/quaternion.hpp"
#include "quint/report.hpp"
#include "quint/version.hpp"
