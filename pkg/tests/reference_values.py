"""Reference error tables the acceptance suite compares against.

Rows are ``(linf, l2, h1)``; ladders run from the coarsest entry down.
"""

import numpy as np

TEMPORAL_K = [2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4]

# damped (alpha = 0.01), h = 5e-4, T = 0.1
TEMPORAL_DAMPED = np.array([
    [0.013517320602480, 0.008817014136207, 0.060170606240083],
    [0.009093911836419, 0.005399671144500, 0.039122839681984],
    [0.005080840309998, 0.003060550005000, 0.022350170425717],
    [0.002605046974160, 0.001639087410385, 0.011882958530157],
    [0.001304955694311, 8.505492063928758e-04, 0.006121659921789],
    [6.507998847741087e-04, 4.341324733964456e-04, 0.003113488007849],
    [3.244944640112823e-04, 2.195635788923884e-04, 0.001573104885449],
])
TEMPORAL_DAMPED_ORDERS = (0.918275397527218, 0.896549694749004, 0.890829368604443)

# undamped variant, same protocol
TEMPORAL_UNDAMPED = np.array([
    [0.013537707345784, 0.008843496854506, 0.060208506436330],
    [0.009123251664833, 0.005420865663023, 0.039213187891314],
    [0.005104857017801, 0.003077981908226, 0.022450427816651],
    [0.002619628411882, 0.001650564604991, 0.011951250416275],
    [0.001312495917216, 8.571574701860828e-04, 0.006160144072687],
    [6.544134217098541e-04, 4.377049821189154e-04, 0.003134030652176],
    [3.261646570654059e-04, 2.214333020304648e-04, 0.001583901331159],
])

SPATIAL_N = [16, 24, 32, 48, 64]
SPATIAL = np.array([
    [4.244649934947095e-04, 2.939188755381458e-04, 0.002202247993444],
    [1.904974803562040e-04, 1.330580408930415e-04, 9.690131243557937e-04],
    [1.082529259365597e-04, 7.701029722223597e-05, 5.408447724250333e-04],
    [4.947541044093839e-05, 3.717722990660095e-05, 2.379203616012192e-04],
    [3.101638869329459e-05, 2.340268587852941e-05, 1.349769713496774e-04],
])
SPATIAL_ORDERS = (1.900919204662317, 1.830084876345314, 2.016814249261991)

COUPLED_N = [10, 20, 24, 28]
COUPLED_LINF = [5.000319903357697e-04, 1.260826539929427e-04, 8.888966024822587e-05, 6.531622705829854e-05]

# damped variant without the double-diffusion stage
SCHEME_A_K = [2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4]
SCHEME_A_DAMPED_LINF = [0.032270043090955, 1.803719315427388, 1.998107768985083,
                        1.988093537073624, 2.004058157997310, 2.019779868128165]
