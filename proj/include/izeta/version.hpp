#pragma once

#define IZETA_VERSION_MAJOR 1
#define IZETA_VERSION_MINOR 0
#define IZETA_VERSION_PATCH 0
#define IZETA_VERSION "1.0.0"
