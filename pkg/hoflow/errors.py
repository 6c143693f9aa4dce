'''
Exceptions raised by hoflow.

DomainError covers inputs outside the mathematical domain of a function
(the CLI maps it to exit code 2), NumericalError covers failures of an
engine on valid input (exit code 3).
'''

class HoflowError(Exception):
    '''Base class of all hoflow exceptions.'''

class DomainError(HoflowError, ValueError):
    '''Parameters lie outside the domain where the requested object is defined.'''

class NumericalError(HoflowError, ArithmeticError):
    '''An engine could not produce a trustworthy value.'''

class PoleError(NumericalError):
    '''Gamma function evaluated at a non-positive integer.'''
    def __init__(self, n: int, z: complex = None):
        self.n = n
        self.z = z
        super().__init__(f"Gamma has a pole at {n} (argument {z})")

class NotRegular(DomainError):
    '''c(m; rho(m)) is not finite and nonzero.'''

class Unsupported(DomainError):
    '''The requested quantity is not available for these parameters.'''

class SingularPoint(DomainError):
    '''Point too close to a reflecting hyperplane for the requested operator.'''

class NonGenericSpectral(NumericalError):
    '''Spectral parameter on (or too close to) a hyperplane <mu, mu - 2 lambda> = 0.'''
    def __init__(self, mu, value: complex = None):
        self.mu = tuple(mu)
        self.value = value
        super().__init__(f"Spectral parameter is not generic: <mu, mu - 2 lambda> = {value} at mu = {self.mu}")

class WallTooClose(NumericalError):
    '''Series evaluation point too close to a wall of the positive chamber.'''
    def __init__(self, margin: float, minimum: float):
        self.margin = margin
        self.minimum = minimum
        super().__init__(f"Wall margin {margin:.3g} is below the series minimum {minimum:.3g}")

class DegenerateOrbit(NumericalError):
    '''Weyl orbit of the spectral parameter is not free.'''

class ResonanceAtZero(NumericalError):
    '''Frobenius bootstrap hit a singular shell k*I - M_0.'''
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"Frobenius recursion is resonant at order {k}")

class StiffnessFailure(NumericalError):
    '''ODE integrator failed (step collapse).'''

class SeriesCancellation(NumericalError):
    '''Harish-Chandra sum lost too many digits to cancellation.'''
