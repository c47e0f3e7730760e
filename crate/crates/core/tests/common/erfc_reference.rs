//! erfc at points with |xi| <= 5, evaluated with 40-digit arithmetic and
//! rounded to double: (re xi, im xi, re erfc, im erfc).

pub const VALUES: [(f64, f64, f64, f64); 40] = [
    (0.0, 0.0, 1.0, 0.0),
    (1.0, 0.0, 0.15729920705028513, 0.0),
    (0.5, 0.5, 0.3573870851451795, -0.4578813944351922),
    (-2.0, 1.0, 2.003606342725652, 0.011259006028815025),
    (3.0, -4.0, 121.18699139507945, -27.750337293623904),
    (0.0, 5.0, 1.0, -8298273880.676804),
    (4.9, 0.0, 4.218936524005766e-12, 0.0),
    (-4.9, 0.2, 2.000000000001823, -3.991226282107414e-12),
    (1.5, 1.5, 0.11826146608875028, 0.23124007509130207),
    (2.5, -2.5, 0.12363680464957867, 0.09992877379159747),
    (-1.761672, -3.491508, -893.5079785219033, 940.726013657348),
    (1.509345, -4.275637, 17839.41465102256, 1130232.5701179663),
    (0.35882, -1.343111, -1.0206427466831278, 2.2049433618927523),
    (-4.420011, 0.074357, 1.9999999996791298, -2.5597623785161795e-10),
    (-4.625043, -0.663543, 1.999999999905816, -8.180721612506443e-13),
    (-0.754808, 3.268521, -4327.7660659509775, 129.8561669302658),
    (-3.76198, -2.76761, 2.000154306156238, 9.557608716090398e-05),
    (1.274332, 4.477089, 12268617.260939293, -1531710.9552500655),
    (0.771029, -1.033195, -0.4328104101645955, 0.5038294268285088),
    (3.584685, -2.103907, -2.916951073779746e-05, 3.4298920695001457e-06),
    (-1.915182, 3.161264, -72.49792854548568, -44.00901085141495),
    (-3.192736, 0.816002, 1.9999919964914232, 8.94618155719495e-06),
    (1.389135, -1.276025, -0.10925914898862761, -0.18174944966298026),
    (0.477445, -4.37211, 16695918.6101978, -12764416.015605919),
    (1.804, -0.724077, -0.016963228043124, 0.0036243394118900237),
    (-1.858528, 0.855619, 2.01545901890982, 0.0066204570313864826),
    (-0.468156, -2.00233, 15.504403243729076, 0.37106461466527213),
    (2.943795, 1.989944, 0.0013524487749458202, 0.00040339888211121406),
    (-2.559035, 0.744237, 2.000302325343672, 0.00039778585790577355),
    (0.251965, 3.751375, -183614.98386002798, 46233.10940561855),
    (2.294453, -2.120622, -0.044582398385005356, -0.07002252422422439),
    (-0.818772, 2.571409, -52.624004412106196, 64.0249585452322),
    (-3.480155, -0.110369, 1.9999993936987117, 6.21418528725813e-07),
    (-4.607927, 1.682159, 2.000000001142034, 1.5184111816594766e-10),
    (2.645709, 0.730259, -0.00017276796606781382, 0.0002493720386547967),
    (3.754778, -1.862525, -9.126940606295749e-07, 3.067315067505019e-06),
    (1.952954, 0.943699, -0.007805716723440008, 0.01051134545855496),
    (0.798952, -0.437947, 0.16202034717598096, 0.25536202280486464),
    (-0.259017, 1.641522, 4.747481780459554, -4.811011220140111),
    (-4.393306, 2.01492, 1.9999999793935122, 1.8455215882528953e-08),
];
