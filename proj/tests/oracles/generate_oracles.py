from mpmath import mp, mpf, gamma, loggamma, log, e, quad, exp, nsum, inf, cos
mp.dps=40
def N(a): return 1-a+a/gamma(a)
a=mpf('0.1')
print('phi0.1', (1-a)/N(a), 'psi0.1', a/N(a))
print('lg3.2', loggamma(mpf('3.2')), 'lg200', loggamma(200), 'lg1e-3', loggamma(mpf('0.001')), 'lg0.5',loggamma(mpf('0.5')))
# mlf k=0.2,l=1,p=1.1,s=-3
z=-3*log(mpf('1.1'))
print('mlf', nsum(lambda n: z**n/gamma(mpf('0.2')*n+1),[0,inf]))
# rl integral g=t^2, w=t+2, beta=0.7 at t=1
b=mpf('0.7')
print('rl', quad(lambda s:(1-s)**(b-1)*(s+2)*s**2,[0,1])/gamma(b)/3)
# example1 exact at 1
al,be,p=mpf('0.1'),mpf('0.2'),mpf('1.1')
phi=(1-al)/N(al); psi=al/N(al)
print('ex1', phi+2*log(p)*psi/gamma(be+3))
# gronwall const alpha .2 beta .5 p 2 lam .4 N one u=1 T=1
al,be,p,lam=mpf('0.2'),mpf('0.5'),mpf(2),mpf('0.4')
phi=1-al;psi=al
x=log(p)*lam*psi/(1-lam*phi)
print('gc', 1/(1-lam*phi)*(1+nsum(lambda n: x**n/gamma(n*be),[1,inf])))
# gronwall series u=1+s v=s/10, t=1, a=0
t=mpf(1)
def U(s): return (1+s)/(1-phi*s/10)
X=log(p)*psi*(t/10)/(1-phi*t/10)
def term(n):
    nb=n*be
    # substitution x=(t-s), x^{nb-1}; z=x^{nb}
    return X**n/gamma(nb)* quad(lambda z: U(t - z**(1/nb)),[0,1])/nb
print('gs', U(t)*0+ (1+t)/(1-phi*t/10) + nsum(term,[1,inf]))
# remainder: alpha .1 beta .2 p 1.1 N gamma h .01 n 100 M2 2
al,be,p=mpf('0.1'),mpf('0.2'),mpf('1.1'); psi=al/N(al); h=mpf('0.01'); n=100
print('rem', log(p)*psi*h**(be+2)/(4*gamma(be+2))*(n+1)*(n+4+2*be)*((n+1)**be-be*n**be)*2)
print('A3', mpf(3)**mpf('0.2')*(3+1+mpf('0.2'))-4**mpf('1.2'), 'B5', 6**mpf('0.7')*(7+mpf('0.7'))-5**mpf('0.7')*(5+2+mpf('1.4')))
