#pragma once

#include "cosserat_dem/core.hpp"
#include "cosserat_dem/mesh.hpp"
#include "cosserat_dem/mesh_io.hpp"
#include "cosserat_dem/quadrature.hpp"
#include "cosserat_dem/reconstruction.hpp"
#include "cosserat_dem/material.hpp"
#include "cosserat_dem/system.hpp"
#include "cosserat_dem/solver.hpp"
#include "cosserat_dem/dynamics.hpp"
#include "cosserat_dem/postprocess.hpp"
#include "cosserat_dem/cases.hpp"
#include "cosserat_dem/io.hpp"
#include "cosserat_dem/config.hpp"
