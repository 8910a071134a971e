#pragma once

#define QPOLAR_VERSION "1.0.0"
